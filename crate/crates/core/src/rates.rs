//! Rate loss of making a nondecodable code decodable, either with counter
//! cells carrying no data or with an appended synchronous code.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::code::CodeParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("target length {target_n} must exceed the {cells} extra cells")]
    TooShort { target_n: usize, cells: usize },
    #[error("nondecodable rate must be positive, got {0}")]
    BadRate(f64),
    #[error("unknown preset {0:?}; expected one of tableV, tableVI, tableVII, tableVIII, ternary")]
    UnknownPreset(String),
    #[error("bad sync code parameters: {0}")]
    BadSyncCode(String),
    #[error(transparent)]
    Csv(#[from] CsvError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct CsvError(String);

/// Cells needed to count `t_nd - 1` writes: `ceil((t_nd - 1) / (q - 1))`.
pub fn counter_cells(t_nd: usize, q: u8) -> usize {
    t_nd.saturating_sub(1).div_ceil(q as usize - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasicLoss {
    pub counter_cells: usize,
    pub rate: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyncLoss {
    pub n_sync: usize,
    pub r_sync: f64,
    pub rate: f64,
    pub gamma: f64,
}

pub fn rate_loss_basic(r_nd: f64, t_nd: usize, q: u8, target_n: usize) -> Result<BasicLoss, RateError> {
    if r_nd <= 0.0 {
        return Err(RateError::BadRate(r_nd));
    }
    let c = counter_cells(t_nd, q);
    if target_n <= c {
        return Err(RateError::TooShort { target_n, cells: c });
    }
    let n = target_n as f64;
    Ok(BasicLoss {
        counter_cells: c,
        rate: r_nd * (target_n - c) as f64 / n,
        gamma: c as f64 / n,
    })
}

pub fn rate_loss_sync(r_nd: f64, target_n: usize, sync: &CodeParams) -> Result<SyncLoss, RateError> {
    if r_nd <= 0.0 {
        return Err(RateError::BadRate(r_nd));
    }
    let n_sync = sync.n();
    if target_n <= n_sync {
        return Err(RateError::TooShort {
            target_n,
            cells: n_sync,
        });
    }
    let n = target_n as f64;
    let r_sync = sync.wom_rate();
    Ok(SyncLoss {
        n_sync,
        r_sync,
        rate: (r_nd * (target_n - n_sync) as f64 + r_sync * n_sync as f64) / n,
        gamma: n_sync as f64 / n * (1.0 - r_sync / r_nd),
    })
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub q: u8,
    pub target_n: usize,
    pub t_nd: usize,
    pub r_nd: f64,
    pub counter_cells: usize,
    pub basic_rate: f64,
    pub gamma_basic: f64,
    pub sync_code: String,
    pub n_sync: usize,
    pub r_sync: f64,
    pub sync_rate: f64,
    pub gamma_sync: f64,
    pub reduction_factor: f64,
}

/// Both approaches for a `t_nd = sync.t()` write nondecodable code of rate
/// `r_nd` over the alphabet of `sync`.
pub fn rate_report(r_nd: f64, target_n: usize, sync: &CodeParams) -> Result<RateReport, RateError> {
    let basic = rate_loss_basic(r_nd, sync.t(), sync.q(), target_n)?;
    let with = rate_loss_sync(r_nd, target_n, sync)?;
    Ok(RateReport {
        q: sync.q(),
        target_n,
        t_nd: sync.t(),
        r_nd,
        counter_cells: basic.counter_cells,
        basic_rate: basic.rate,
        gamma_basic: basic.gamma,
        sync_code: sync.to_string(),
        n_sync: with.n_sync,
        r_sync: with.r_sync,
        sync_rate: with.rate,
        gamma_sync: with.gamma,
        reduction_factor: basic.gamma / with.gamma,
    })
}

/// A nondecodable rate with the synchronous code appended to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetRow {
    pub r_nd: f64,
    pub source: &'static str,
    pub sync: &'static str,
}

const BINARY_SOURCE: &str = "best published nondecodable binary code";
const Q4_SOURCE: &str = "published quaternary construction";
const Q4_DERIVED: &str = "quaternary lift of binary rates";
const TERNARY_SOURCE: &str = "ternary 2(q-1)-write lift of the best 2-write binary rate";

const BINARY_ROWS: &[PresetRow] = &[
    PresetRow {
        r_nd: 1.8566,
        source: BINARY_SOURCE,
        sync: "[3,4:1,3,1,1]_2",
    },
    PresetRow {
        r_nd: 1.8566,
        source: BINARY_SOURCE,
        sync: "[5,4:1,5,3,6]_2",
    },
    PresetRow {
        r_nd: 1.9689,
        source: BINARY_SOURCE,
        sync: "[4,5:1,4,3,1,1]_2",
    },
    PresetRow {
        r_nd: 2.1331,
        source: BINARY_SOURCE,
        sync: "[5,6:1,5,3,2,1,1]_2",
    },
    PresetRow {
        r_nd: 2.1723,
        source: BINARY_SOURCE,
        sync: "[6,7:1,6,5,3,1,1,1]_2",
    },
    PresetRow {
        r_nd: 2.1723,
        source: BINARY_SOURCE,
        sync: "[8,7:1,8,4,6,3,4,2]_2",
    },
];

const QUATERNARY_ROWS: &[PresetRow] = &[
    PresetRow {
        r_nd: 3.9328,
        source: Q4_SOURCE,
        sync: "[2,5:1,2,2,3,3]_4",
    },
    PresetRow {
        r_nd: 4.2594,
        source: Q4_SOURCE,
        sync: "[2,6:1,2,2,3,2,1]_4",
    },
    PresetRow {
        r_nd: 4.3394,
        source: Q4_SOURCE,
        sync: "[2,7:1,2,2,2,1,1,1]_4",
    },
    PresetRow {
        r_nd: 4.5088,
        source: Q4_DERIVED,
        sync: "[3,8:1,3,3,3,2,1,1,3]_4",
    },
    PresetRow {
        r_nd: 4.5836,
        source: Q4_DERIVED,
        sync: "[3,9:1,3,3,3,2,1,1,1,2]_4",
    },
    PresetRow {
        r_nd: 4.6932,
        source: Q4_DERIVED,
        sync: "[3,10:1,3,3,3,2,1,1,1,1,1]_4",
    },
    PresetRow {
        r_nd: 4.7193,
        source: Q4_DERIVED,
        sync: "[4,11:1,4,2,4,2,6,3,4,2,2,1]_4",
    },
];

const TERNARY_ROWS: &[PresetRow] = &[PresetRow {
    r_nd: 2.9856,
    source: TERNARY_SOURCE,
    sync: "[2,4:1,2,2,2]_3",
}];

pub const PRESETS: &[&str] = &["tableV", "tableVI", "tableVII", "tableVIII", "ternary"];

/// Rows and target length of a named preset.
pub fn preset(name: &str) -> Result<(usize, &'static [PresetRow]), RateError> {
    match name {
        "tableV" => Ok((64, BINARY_ROWS)),
        "tableVI" => Ok((256, BINARY_ROWS)),
        "tableVII" => Ok((64, QUATERNARY_ROWS)),
        "tableVIII" => Ok((256, QUATERNARY_ROWS)),
        "ternary" => Ok((64, TERNARY_ROWS)),
        other => Err(RateError::UnknownPreset(other.to_string())),
    }
}

pub fn preset_reports(name: &str) -> Result<Vec<RateReport>, RateError> {
    let (target_n, rows) = preset(name)?;
    rows.iter()
        .map(|row| {
            let sync: CodeParams = row
                .sync
                .parse()
                .map_err(|e| RateError::BadSyncCode(format!("{}: {e}", row.sync)))?;
            rate_report(row.r_nd, target_n, &sync)
        })
        .collect()
}

pub const CSV_HEADER: [&str; 10] = [
    "q",
    "target_n",
    "t_nd",
    "R_nd",
    "basic_rate",
    "gamma_basic_pct",
    "sync_code",
    "sync_rate",
    "gamma_sync_pct",
    "reduction_factor",
];

/// Fixed-point text with ties rounded away from zero (`3.125` -> `3.13`).
/// Values within floating-point noise of a tie count as the tie.
pub fn fixed(x: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let snapped = (x * scale * 1e6).round() / 1e6;
    format!("{:.*}", decimals, snapped.round() / scale)
}

/// Formatted cells of one CSV row: rates to 4 decimals, percentages and
/// factors to 2.
pub fn csv_record(r: &RateReport) -> [String; 10] {
    [
        r.q.to_string(),
        r.target_n.to_string(),
        r.t_nd.to_string(),
        fixed(r.r_nd, 4),
        fixed(r.basic_rate, 4),
        fixed(100.0 * r.gamma_basic, 2),
        r.sync_code.clone(),
        fixed(r.sync_rate, 4),
        fixed(100.0 * r.gamma_sync, 2),
        fixed(r.reduction_factor, 2),
    ]
}

pub fn write_csv<W: Write>(reports: &[RateReport], out: W) -> Result<(), RateError> {
    let err = |e: csv::Error| RateError::Csv(CsvError(e.to_string()));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in reports {
        w.write_record(csv_record(r)).map_err(err)?;
    }
    w.flush().map_err(|e| RateError::Csv(CsvError(e.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_ties_round_away() {
        assert_eq!(fixed(4.5088 * 61.0 / 64.0, 4), "4.2975");
        assert_eq!(fixed(3.125, 2), "3.13");
        assert_eq!(fixed(1.00004, 4), "1.0000");
    }

    fn p(s: &str) -> CodeParams {
        s.parse().unwrap()
    }

    #[test]
    fn counter_cells_per_alphabet() {
        assert_eq!(counter_cells(4, 2), 3);
        assert_eq!(counter_cells(11, 4), 4);
        assert_eq!(counter_cells(1, 4), 0);
        assert_eq!(counter_cells(4, 3), 2);
    }

    #[test]
    fn basic_loss_rows() {
        let b = rate_loss_basic(1.9689, 5, 2, 64).unwrap();
        assert_eq!(format!("{:.4} {:.2}", b.rate, 100.0 * b.gamma), "1.8458 6.25");
        let b = rate_loss_basic(4.7193, 11, 4, 64).unwrap();
        assert_eq!(b.counter_cells, 4);
        assert_eq!(format!("{:.4} {:.2}", b.rate, 100.0 * b.gamma), "4.4243 6.25");
        let b = rate_loss_basic(2.0, 1, 3, 10).unwrap();
        assert_eq!((b.rate, b.gamma), (2.0, 0.0));
    }

    #[test]
    fn sync_loss_rows() {
        let s = rate_loss_sync(2.1723, 64, &p("[8,7:1,8,4,6,3,4,2]")).unwrap();
        assert_eq!(format!("{:.4} {:.2}", s.rate, 100.0 * s.gamma), "2.0909 3.75");
        let r = rate_report(3.9328, 256, &p("[2,5:1,2,2,3,3]_4")).unwrap();
        assert_eq!(
            format!(
                "{:.4} {:.2} {:.2}",
                r.sync_rate,
                100.0 * r.gamma_sync,
                r.reduction_factor
            ),
            "3.9223 0.27 2.92"
        );
    }

    #[test]
    fn zero_rate_sync_equals_counter() {
        let s = rate_loss_sync(1.9, 64, &p("[3,4:1,1,1,1]")).unwrap();
        let b = rate_loss_basic(1.9, 4, 2, 64).unwrap();
        assert!((s.gamma - b.gamma).abs() < 1e-15);
    }

    #[test]
    fn gamma_sync_decreases_with_r_sync() {
        let gamma = |r_sync: f64| 4.0 / 64.0 * (1.0 - r_sync / 2.0);
        let mut last = f64::INFINITY;
        for k in 0..=20 {
            let g = gamma(k as f64 * 0.1);
            assert!(g < last);
            last = g;
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&preset_reports("ternary").unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "q,target_n,t_nd,R_nd,basic_rate,gamma_basic_pct,sync_code,sync_rate,gamma_sync_pct,reduction_factor\n\
             3,64,4,2.9856,2.8923,3.13,\"[2,4:1,2,2,2]_3\",2.9392,1.55,2.01\n"
        );
    }
}
