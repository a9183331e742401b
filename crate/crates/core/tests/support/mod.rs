#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use womkit::search::Partition;
use womkit::{CodeProperties, MemoryState, TableCode};

pub fn womkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_womkit"))
        .args(args)
        .output()
        .expect("womkit binary runs")
}

pub fn stdout_of(args: &[&str]) -> Result<String, String> {
    let out = womkit(args);
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(format!(
            "womkit {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

/// Every length-`n` word over `0..q` with digit sum `i`.
pub fn words(q: u8, n: usize, i: u32) -> Vec<Vec<u8>> {
    fn go(q: u8, left: usize, rem: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..q {
            if u32::from(v) > rem {
                break;
            }
            cur.push(v);
            go(q, left - 1, rem - u32::from(v), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(q, n, i, &mut Vec::new(), &mut out);
    out
}

fn below(x: &[u8], y: &[u8]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Brute-force check that `p` is a family of disjoint subsets of `E_q(n,i)`,
/// each covering all of `E_q(n,i-1)` from above.
pub fn brute_force_partition(p: &Partition) -> Result<(), String> {
    let lower = words(p.q, p.n, p.i - 1);
    let mut seen = std::collections::HashSet::new();
    for (k, class) in p.classes.iter().enumerate() {
        if class.is_empty() {
            return Err(format!("class {k} is empty"));
        }
        for y in class {
            if y.q() != p.q || y.len() != p.n || y.weight() != p.i {
                return Err(format!("class {k} holds {y}, outside the slice"));
            }
            if !seen.insert(y.cells().to_vec()) {
                return Err(format!("{y} appears twice"));
            }
        }
        for x in &lower {
            if !class.iter().any(|y| below(x, y.cells())) {
                return Err(format!("class {k} does not cover {x:?}"));
            }
        }
    }
    Ok(())
}

pub fn state(q: u8, text: &str) -> MemoryState {
    MemoryState::parse(q, text).unwrap()
}

pub fn rebuild(code: &TableCode, edit: impl FnOnce(&mut Vec<Vec<Vec<MemoryState>>>)) -> TableCode {
    let mut gens = code.generations().to_vec();
    edit(&mut gens);
    TableCode::new(code.q(), code.n(), gens).expect("mutation keeps the table well formed")
}

pub fn class_index(code: &TableCode, generation: usize, member: &str) -> usize {
    code.generation(generation)
        .iter()
        .position(|c| c.iter().any(|s| s.to_text() == member))
        .expect("member present")
}

/// One deliberately broken code: its source, the mutated table and the
/// property checkers expected to change.
pub struct Mutation {
    pub name: &'static str,
    pub source: &'static str,
    pub code: TableCode,
    pub flips: &'static [&'static str],
}

pub fn flags(p: &CodeProperties) -> [(&'static str, bool); 6] {
    [
        ("valid", p.is_valid),
        ("decodable", p.is_decodable),
        ("synchronous", p.is_synchronous),
        ("laminar", p.is_laminar),
        ("fixed-rate", p.is_fixed_rate),
        ("all-zero", p.contains_all_zero),
    ]
}

pub fn mutation_corpus() -> Vec<Mutation> {
    let cat = |id: &str| womkit::catalog::entry(id).unwrap().table;
    let mut out = Vec::new();

    let c = cat("ex5_inner");
    let k = class_index(&c, 2, "1100");
    out.push(Mutation {
        name: "drop a covering state",
        source: "ex5_inner",
        code: rebuild(&c, |g| g[1][k].retain(|s| s.to_text() != "0011")),
        flips: &["valid"],
    });

    let c = cat("fixed_3_2");
    out.push(Mutation {
        name: "remove a final class",
        source: "fixed_3_2",
        code: rebuild(&c, |g| {
            g[1].pop();
        }),
        flips: &["fixed-rate"],
    });

    let c = cat("w5_3_536");
    let used: Vec<String> = c.image(2).map(|s| s.to_text()).collect();
    let spare = womkit::search::enumerate_slice(2, 5, 2)
        .states
        .into_iter()
        .find(|s| !used.contains(&s.to_text()))
        .expect("one weight-two state is unused");
    out.push(Mutation {
        name: "unused lighter state joins the last generation",
        source: "w5_3_536",
        code: rebuild(&c, |g| g[2][0].push(spare)),
        flips: &["laminar"],
    });

    let c = cat("q4_sync_24");
    let k = class_index(&c, 2, "11");
    out.push(Mutation {
        name: "first-write state repeated one generation later with its message",
        source: "q4_sync_24",
        code: rebuild(&c, |g| g[1][k].push(state(4, "01"))),
        flips: &["synchronous"],
    });

    let c = cat("table1_decodable");
    out.push(Mutation {
        name: "first-generation messages 2 and 3 swapped",
        source: "table1_decodable",
        code: rebuild(&c, |g| g[0].swap(1, 2)),
        flips: &["decodable"],
    });

    let c = cat("ex5_inner");
    out.push(Mutation {
        name: "all-zero generation prepended",
        source: "ex5_inner",
        code: womkit::compose::prepend_zero_generation(&c).unwrap(),
        flips: &["all-zero"],
    });
    out
}

/// Checker names whose verdict differs between `before` and `after`.
pub fn flipped(before: &CodeProperties, after: &CodeProperties) -> Vec<&'static str> {
    flags(before)
        .iter()
        .zip(flags(after))
        .filter(|(a, b)| a.1 != b.1)
        .map(|(a, _)| a.0)
        .collect()
}
