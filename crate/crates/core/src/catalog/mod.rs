//! Named reference codes and the JSON code-file format.

mod file;

use thiserror::Error;

pub use file::{code_to_json, parse_code_json, read_code_file, write_code_file, FileError};

use crate::code::{CodeParams, TableCode};
use crate::verify::{self, CodeProperties};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params: CodeParams,
    pub table: TableCode,
    pub expected: CodeProperties,
    pub expected_rate: f64,
    pub provenance: &'static str,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog entry named {0:?}")]
    Unknown(String),
    #[error("catalog entry {id} is corrupt: {check}")]
    Corrupt { id: &'static str, check: String },
}

struct Spec {
    id: &'static str,
    params: &'static str,
    props: [bool; 6],
    rate: f64,
    provenance: &'static str,
    source: Source,
}

enum Source {
    Digits(u8, &'static [&'static [&'static [&'static str]]]),
    Json(&'static str),
}

// props: valid, decodable, synchronous, laminar, fixed-rate, all-zero
const SYNC: [bool; 6] = [true, true, true, false, false, false];
const LAMINAR: [bool; 6] = [true, true, true, true, false, false];

const SPECS: &[Spec] = &[
    Spec {
        id: "fig1_laminar",
        params: "[4,4:4,2,2,1]_2",
        props: LAMINAR,
        rate: 1.0,
        provenance: "laminar state diagram on four cells; generation 2-3 classes read from the edge styles, \
                     solid = message 1, dashed = message 2",
        source: Source::Digits(
            2,
            &[
                &[&["1000"], &["0100"], &["0010"], &["0001"]],
                &[&["1100", "0011"], &["1010", "0101"]],
                &[&["1110", "0111"], &["1101", "1011"]],
                &[&["1111"]],
            ],
        ),
    },
    Spec {
        id: "q4_sync_24",
        params: "[2,4:2,2,3,3]_4",
        props: SYNC,
        rate: 2.5850,
        provenance: "quaternary synchronous but nonlaminar state diagram; also obtained by reorganizing \
                     merged generations of [2,6:2,2,2,1,1,1]_4",
        source: Source::Digits(
            4,
            &[
                &[&["01"], &["10"]],
                &[&["11"], &["20", "02"]],
                &[&["21", "03"], &["12", "30"], &["22"]],
                &[&["13", "32"], &["31", "23"], &["33"]],
            ],
        ),
    },
    Spec {
        id: "table1_decodable",
        params: "[3,2:4,4]_2",
        props: [true, true, false, false, true, true],
        rate: 4.0 / 3.0,
        provenance: "decodable but nonsynchronous two-write code on three cells",
        source: Source::Digits(
            2,
            &[
                &[&["000"], &["100"], &["010"], &["001"]],
                &[&["000", "111"], &["100", "011"], &["010", "101"], &["001", "110"]],
            ],
        ),
    },
    Spec {
        id: "fig3_prepended",
        params: "[4,5:1,4,2,2,1]_2",
        props: [true, true, true, true, false, true],
        rate: 1.0,
        provenance: "fig1_laminar with a leading generation holding only the all-zero state",
        source: Source::Digits(
            2,
            &[
                &[&["0000"]],
                &[&["1000"], &["0100"], &["0010"], &["0001"]],
                &[&["1100", "0011"], &["1010", "0101"]],
                &[&["1110", "0111"], &["1101", "1011"]],
                &[&["1111"]],
            ],
        ),
    },
    Spec {
        id: "ex5_inner",
        params: "[4,3:4,3,2]_2",
        props: LAMINAR,
        rate: 1.146_240_625_180_289,
        provenance: "inner code of the concatenation example",
        source: Source::Digits(
            2,
            &[
                &[&["0001"], &["0010"], &["0100"], &["1000"]],
                &[&["1100", "0011"], &["1010", "0101"], &["1001", "0110"]],
                &[&["0111", "1011", "1101", "1110"], &["1111"]],
            ],
        ),
    },
    Spec {
        id: "c2_writes2",
        params: "[2,2:2,1]_2",
        props: LAMINAR,
        rate: 0.5,
        provenance: "outer code of the concatenation example",
        source: Source::Digits(2, &[&[&["01"], &["10"]], &[&["11"]]]),
    },
    Spec {
        id: "w5_3_536",
        params: "[5,3:5,3,6]_2",
        props: LAMINAR,
        rate: 1.2984,
        provenance: "three-write code whose third generation is the six reorganized classes of weight 3 to 5",
        source: Source::Digits(
            2,
            &[
                &[&["10000"], &["01000"], &["00100"], &["00010"], &["00001"]],
                &[
                    &["11000", "00110", "00101"],
                    &["10100", "01010", "00011"],
                    &["10010", "01001", "01100"],
                ],
                &[
                    &["01111", "11001", "10110"],
                    &["10111", "11100", "01011"],
                    &["11011", "01110", "10101"],
                    &["11101", "00111", "11010"],
                    &["11110", "10011", "01101"],
                    &["11111"],
                ],
            ],
        ),
    },
    Spec {
        id: "w5_3_534",
        params: "[5,3:5,3,4]_2",
        props: LAMINAR,
        rate: 1.181_378_293_737_372,
        provenance: "three-write code from merging the last three generations of [5,5:5,3,2,1,1]",
        source: Source::Digits(
            2,
            &[
                &[&["10000"], &["01000"], &["00100"], &["00010"], &["00001"]],
                &[
                    &["11000", "00110", "00101"],
                    &["10100", "01010", "00011"],
                    &["10010", "01001", "01100"],
                ],
                &[
                    &["11100", "11010", "10101", "01011", "00111"],
                    &["11001", "10110", "10011", "01110", "01101"],
                    &["11110", "11101", "11011", "10111", "01111"],
                    &["11111"],
                ],
            ],
        ),
    },
    Spec {
        id: "fixed_3_2",
        params: "[3,2:2,2]_2",
        props: [true, true, true, true, true, false],
        rate: 2.0 / 3.0,
        provenance: "fixed-rate synchronous two-write code on three cells",
        source: Source::Digits(2, &[&[&["001"], &["010"]], &[&["110", "101"], &["011"]]]),
    },
    Spec {
        id: "fixed_5_3",
        params: "[5,3:4,4,4]_2",
        props: [true, true, true, true, true, false],
        rate: 1.2,
        provenance: "fixed-rate synchronous three-write code on five cells",
        source: Source::Digits(
            2,
            &[
                &[&["00001"], &["00010"], &["00100"], &["01000"]],
                &[
                    &["11000", "10100", "10010", "10001"],
                    &["01100", "00011"],
                    &["01010", "00101"],
                    &["01001", "00110"],
                ],
                &[
                    &["11100", "11010", "10101", "01011", "00111"],
                    &["11001", "10110", "10011", "01110", "01101"],
                    &["11110", "11101", "11011", "10111", "01111"],
                    &["11111"],
                ],
            ],
        ),
    },
    Spec {
        id: "q4_greedy_26",
        params: "[2,6:2,2,2,1,1,1]_4",
        props: LAMINAR,
        rate: 1.5,
        provenance: "laminar quaternary code on two cells with one generation per weight",
        source: Source::Digits(
            4,
            &[
                &[&["01"], &["10"]],
                &[&["11"], &["20", "02"]],
                &[&["21", "03"], &["12", "30"]],
                &[&["13", "31", "22"]],
                &[&["23", "32"]],
                &[&["33"]],
            ],
        ),
    },
    Spec {
        id: "q4_split_25",
        params: "[2,5:2,2,3,2,1]_4",
        props: SYNC,
        rate: 2.292_481_250_360_578,
        provenance: "q4_sync_24 with its last generation split into two",
        source: Source::Digits(
            4,
            &[
                &[&["01"], &["10"]],
                &[&["11"], &["20", "02"]],
                &[&["21", "03"], &["12", "30"], &["22"]],
                &[&["13", "32"], &["31", "23"]],
                &[&["33"]],
            ],
        ),
    },
    Spec {
        id: "greedy_3_3",
        params: "[3,3:3,1,1]_2",
        props: LAMINAR,
        rate: 0.528_320_833_573_719,
        provenance: "greedy laminar search, q=2 n=3 t=3, frozen output",
        source: Source::Json(include_str!("fixtures/greedy_3_3.json")),
    },
    Spec {
        id: "greedy_4_4",
        params: "[4,4:4,3,1,1]_2",
        props: LAMINAR,
        rate: 0.896_240_625_180_289,
        provenance: "greedy laminar search, q=2 n=4 t=4, frozen output",
        source: Source::Json(include_str!("fixtures/greedy_4_4.json")),
    },
    Spec {
        id: "greedy_5_5",
        params: "[5,5:5,3,2,1,1]_2",
        props: LAMINAR,
        rate: 0.981_378_293_737_372,
        provenance: "greedy laminar search, q=2 n=5 t=5, frozen output",
        source: Source::Json(include_str!("fixtures/greedy_5_5.json")),
    },
    Spec {
        id: "greedy_6_6",
        params: "[6,6:6,5,3,1,1,1]_2",
        props: LAMINAR,
        rate: 1.081_976_706_869_327,
        provenance: "greedy laminar search, q=2 n=6 t=6, frozen output",
        source: Source::Json(include_str!("fixtures/greedy_6_6.json")),
    },
];

pub fn ids() -> impl Iterator<Item = &'static str> {
    SPECS.iter().map(|s| s.id)
}

fn build(spec: &Spec) -> Result<CatalogEntry, CatalogError> {
    let corrupt = |check: String| CatalogError::Corrupt { id: spec.id, check };
    let table = match spec.source {
        Source::Digits(q, gens) => TableCode::from_digits(q, gens).map_err(|e| corrupt(e.to_string()))?,
        Source::Json(text) => parse_code_json(text).map_err(|e| corrupt(e.to_string()))?,
    };
    let params: CodeParams = spec.params.parse().map_err(|e| corrupt(format!("{e}")))?;
    if *table.params() != params {
        return Err(corrupt(format!(
            "table has parameters {}, expected {params}",
            table.params()
        )));
    }
    let [v, d, s, l, f, z] = spec.props;
    let expected = CodeProperties {
        is_valid: v,
        is_decodable: d,
        is_synchronous: s,
        is_laminar: l,
        is_fixed_rate: f,
        contains_all_zero: z,
    };
    if let Err(violation) = verify::verify_wom(&table) {
        if v {
            return Err(corrupt(violation.to_string()));
        }
    }
    let actual = verify::properties(&table);
    if actual != expected {
        return Err(corrupt(format!("properties {actual:?} differ from {expected:?}")));
    }
    let rate = params.wom_rate();
    if (rate - spec.rate).abs() > 1e-4 {
        return Err(corrupt(format!("rate {rate:.6} differs from {:.6}", spec.rate)));
    }
    Ok(CatalogEntry {
        id: spec.id,
        params,
        table,
        expected,
        expected_rate: spec.rate,
        provenance: spec.provenance,
    })
}

/// Every entry, each checked against its recorded properties and rate.
pub fn load_catalog() -> Result<Vec<CatalogEntry>, CatalogError> {
    SPECS.iter().map(build).collect()
}

pub fn entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    let spec = SPECS
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| CatalogError::Unknown(id.to_string()))?;
    build(spec)
}
