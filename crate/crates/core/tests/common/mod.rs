#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_coalloc");

/// Golden case: name, arguments (paths relative to the crate root), expected exit code.
pub const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("shapley_maj3", &["shapley", "--game", "tests/fixtures/maj3.json"], 0),
    ("shapley_glove", &["shapley", "--game", "tests/fixtures/glove.json"], 0),
    ("shapley_matrix_glove", &["shapley", "--game", "tests/fixtures/glove.json", "--matrix"], 0),
    ("check_game_maj3", &["check-game", "--game", "tests/fixtures/maj3.json"], 0),
    ("check_game_glove", &["check-game", "--game", "tests/fixtures/glove.json"], 0),
    ("special_123", &["special", "--n", "3", "--perm", "1,2,3"], 0),
    ("verify_zero3", &["verify", "--allocation", "tests/fixtures/zero3.json"], 1),
    ("verify_special123", &["verify", "--allocation", "tests/fixtures/special123.json"], 1),
    ("verify_shapley3", &["verify", "--allocation", "tests/fixtures/shapley3.json"], 1),
    (
        "falsify_zero3",
        &[
            "falsify",
            "--allocation",
            "tests/fixtures/zero3.json",
            "--sampler",
            "superadditive_probes",
            "--trials",
            "1",
            "--seed",
            "0",
        ],
        1,
    ),
    (
        "falsify_shapley3",
        &[
            "falsify",
            "--allocation",
            "tests/fixtures/shapley3.json",
            "--sampler",
            "monotone_random",
            "--trials",
            "200",
            "--seed",
            "5",
        ],
        0,
    ),
    ("decompose_shapley3", &["decompose", "--allocation", "tests/fixtures/shapley3.json"], 0),
    ("decompose_random4", &["decompose", "--allocation", "tests/fixtures/random4.json"], 0),
    ("decompose_zero3", &["decompose", "--allocation", "tests/fixtures/zero3.json"], 1),
    (
        "verify_cert_random4",
        &[
            "verify-cert",
            "--allocation",
            "tests/fixtures/random4.json",
            "--cert",
            "tests/fixtures/random4_cert.json",
        ],
        0,
    ),
    (
        "verify_cert_mismatch",
        &[
            "verify-cert",
            "--allocation",
            "tests/fixtures/shapley3.json",
            "--cert",
            "tests/fixtures/random4_cert.json",
        ],
        1,
    ),
    ("generate_n4", &["generate", "--n", "4", "--support", "6", "--seed", "2024"], 0),
    (
        "payoff_special123_maj3",
        &["payoff", "--allocation", "tests/fixtures/special123.json", "--game", "tests/fixtures/maj3.json"],
        0,
    ),
    ("span_maj3", &["span", "--game", "tests/fixtures/maj3.json"], 0),
    ("span_glove", &["span", "--game", "tests/fixtures/glove.json"], 0),
    ("malformed_game", &["check-game", "--game", "tests/fixtures/malformed.json"], 2),
    ("short_game", &["shapley", "--game", "tests/fixtures/short7.json"], 2),
    ("ragged_allocation", &["verify", "--allocation", "tests/fixtures/ragged.json"], 2),
    ("missing_file", &["verify", "--allocation", "tests/fixtures/absent.json"], 2),
    ("unknown_command", &["frobnicate"], 2),
    ("unknown_flag", &["special", "--n", "3", "--perm", "1,2,3", "--bogus"], 2),
];

pub fn crate_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_root().join("tests/golden").join(format!("{name}.txt"))
}

/// Runs the binary from the crate root and returns (exit code, transcript).
pub fn transcript(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).current_dir(crate_root()).output().expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let text = format!(
        "$ coalloc {}\n{}--- stderr ---\n{}--- exit {code} ---\n",
        args.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
    );
    (code, text)
}

/// Compares one golden case, running it twice. `Err` describes the first mismatch.
pub fn check_golden(name: &str, args: &[&str], expected_code: i32) -> Result<(), String> {
    let (code, first) = transcript(args);
    let (_, second) = transcript(args);
    if first != second {
        return Err(format!("{name}: output differs between two runs"));
    }
    if code != expected_code {
        return Err(format!("{name}: exit {code}, expected {expected_code}"));
    }
    let path = golden_path(name);
    if std::env::var_os("COALLOC_BLESS").is_some() {
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want != first {
        return Err(format!("{name}: transcript differs from {}", rel(&path)));
    }
    Ok(())
}

fn rel(p: &Path) -> String {
    p.strip_prefix(crate_root()).unwrap_or(p).display().to_string()
}

pub fn fixture(name: &str) -> PathBuf {
    crate_root().join("tests/fixtures").join(name)
}

use coalloc::{
    random_allocation, shapley_matrix, special_allocation, AllocationMatrix, Coalition, Decomposition,
    SetChain,
};
use rand::Rng;

fn special(perm: &str) -> AllocationMatrix {
    special_allocation(&SetChain::parse_one_based(perm).unwrap())
}

fn m(mask: u32) -> Coalition {
    Coalition::from_mask(mask)
}

/// The reversed-pair matrix: player 1 gains at `{1}` and loses at `{1,2}`.
pub fn reversed_pair() -> AllocationMatrix {
    let mut a = special("1,2,3");
    for s in Coalition::all(3) {
        a.set(0, s, 0.0);
    }
    a.set(0, m(0b001), 1.0);
    a.set(0, m(0b011), -1.0);
    a
}

/// Ten perturbed 3-player matrices, each breaking sign, pairing or partial row sums.
pub fn curated_perturbed() -> Vec<(&'static str, AllocationMatrix)> {
    let shapley = shapley_matrix(3).unwrap();
    let base = special("1,2,3");
    let mut out = vec![("zero", AllocationMatrix::zeros(3).unwrap()), ("reversed pair", reversed_pair())];

    let mut a = shapley.clone();
    a.set(0, m(0b011), -a.get(0, m(0b011)));
    a.set(0, m(0b010), -a.get(0, m(0b010)));
    out.push(("shapley, one pair of player 1 flipped", a));

    let mut a = shapley.clone();
    a.add_to(0, m(0b011), 0.1);
    out.push(("shapley, pairing broken", a));

    let mut a = base.clone();
    for s in Coalition::all(3) {
        a.set(0, s, 1.0 / 8.0);
    }
    out.push(("special, row 1 flat", a));

    let mut a = base.clone();
    a.set(1, m(0b001), 0.0);
    a.set(1, m(0b100), -1.0);
    out.push(("special, row 2 loss moved to {3}", a));

    out.push(("special doubled", &base * 2.0));

    let mut a = base.clone();
    for s in Coalition::all(3) {
        a.set(2, s, -a.get(2, s));
    }
    out.push(("special, row 3 negated", a));

    out.push(("special halved", &base * 0.5));

    out.push(("affine, not convex", (&base * 1.5) + &(&special("2,1,3") * -0.5)));
    out
}

/// A seeded point of the polytope with a seed-dependent support size.
pub fn polytope_sample(n: usize, seed: u64) -> (AllocationMatrix, Decomposition) {
    let perms: usize = (1..=n).product();
    let mut rng = coalloc::sample::rng_from_seed(seed ^ 0x5eed_0000);
    let support = rng.gen_range(1..=perms);
    random_allocation(n, support, seed).unwrap()
}
