//! Acceptance suite: one line per criterion.
//!
//! Criteria listed in `KNOWN_FALSE` are checked exactly as stated and
//! print FAIL together with a counterexample. They do not fail the run
//! unless `--strict` is given; any other FAIL, or a known-false criterion
//! that starts passing, does.

mod common;

use std::time::{Duration, Instant};

use coalloc::check::DEFAULT_TOL;
use coalloc::decomposition::step_limit;
use coalloc::sample::{random_superadditive_game, rng_from_seed};
use coalloc::{
    apply_allocation, check_abs_sums, check_efficiency, check_level_abs_sums, check_reasonable_structural,
    enumerate_monotone_binary_games, peel_decompose, sample_reasonableness_violation, shapley_matrix,
    span_decompose_monotone_binary, verify_decomposition, AllocationMatrix, Coalition, Game, Sampler,
    SetChain,
};
use common::{check_golden, curated_perturbed, polytope_sample, GOLDEN};

struct Verdict {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into(), notes: Vec::new() }
}

/// Criteria that do not hold as stated, with the reason printed under the FAIL line.
const KNOWN_FALSE: &[(u32, &str)] = &[
    (
        2,
        "every enumerated game has v(∅) = 0, so perturbations confined to column ∅ are invisible to the game sums",
    ),
    (
        6,
        "interior columns need not have absolute sum 2: special allocations have all-zero columns off their chain",
    ),
];

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{:.2}s < {}s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Err(format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    }
}

fn average_of_specials(n: usize) -> AllocationMatrix {
    let chains = SetChain::all(n).unwrap();
    let mut avg = AllocationMatrix::zeros(n).unwrap();
    for c in &chains {
        avg.add_special(c, 1.0 / chains.len() as f64).unwrap();
    }
    avg
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in 1..=6 {
        worst = worst.max(shapley_matrix(n).unwrap().max_abs_diff(&average_of_specials(n)).unwrap());
    }
    match timed(Duration::from_secs(5), start) {
        Ok(t) => verdict(worst <= 1e-12, format!("n = 1..6, max deviation {worst:.1e}, {t}")),
        Err(e) => verdict(false, e),
    }
}

fn game_sums_hold(a: &AllocationMatrix, games: &[Game]) -> bool {
    let full = Coalition::full(a.n());
    games.iter().all(|v| {
        let total = apply_allocation(a, v).unwrap().total();
        (total - (v.value(full) - v.value(Coalition::EMPTY))).abs() <= DEFAULT_TOL
    })
}

fn criterion_2() -> Verdict {
    let (mut matrices, mut disagree, mut disagree_extended) = (0, Vec::new(), 0);
    for n in 1..=4 {
        let games = enumerate_monotone_binary_games(n).unwrap();
        let mut extended = games.clone();
        extended.push(Game::from_fn(n, |_| 1.0).unwrap());

        let shapley = shapley_matrix(n).unwrap();
        let mut cases = vec![AllocationMatrix::zeros(n).unwrap(), shapley.clone()];
        cases.extend((0..10).map(|seed| polytope_sample(n, seed).0));
        for s in Coalition::all(n) {
            let mut a = shapley.clone();
            a.add_to(s.index() % n, s, 0.25);
            cases.push(a);
        }
        for a in &cases {
            matrices += 1;
            let check = check_efficiency(a, DEFAULT_TOL).pass;
            if check != game_sums_hold(a, &games) {
                let bad = Coalition::all(n).find(|&s| {
                    let want = if s.is_empty() {
                        -1.0
                    } else if s == Coalition::full(n) {
                        1.0
                    } else {
                        0.0
                    };
                    (a.column_sum(s) - want).abs() > DEFAULT_TOL
                });
                disagree.push(format!("n = {n} column {}", bad.map_or("?".into(), |c| c.label())));
            }
            if check != game_sums_hold(a, &extended) {
                disagree_extended += 1;
            }
        }
    }
    let mut v = verdict(
        disagree.is_empty(),
        format!("{} of {matrices} matrices disagree [{}]", disagree.len(), disagree.join(", ")),
    );
    v.notes.push(format!(
        "with the constant game v = 1 added to the family: {disagree_extended} of {matrices} disagree"
    ));
    v
}

fn criterion_3_matrices() -> Vec<(usize, u64, AllocationMatrix)> {
    (2..=4).flat_map(|n| (0..50u64).map(move |seed| (n, seed, polytope_sample(n, seed).0))).collect()
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cases = criterion_3_matrices();
    for (n, seed, a) in &cases {
        if !check_reasonable_structural(a, DEFAULT_TOL).pass {
            failures.push(format!("n = {n} seed {seed}: structural"));
        }
        for sampler in Sampler::ALL {
            if let Some(hit) = sample_reasonableness_violation(a, sampler, 1000, *seed, DEFAULT_TOL).unwrap()
            {
                failures.push(format!("n = {n} seed {seed}: {hit}"));
            }
        }
    }
    match timed(Duration::from_secs(30), start) {
        Ok(t) => verdict(
            failures.is_empty(),
            format!("{} matrices x 3 samplers, {} failures, {t}", cases.len(), failures.len()),
        ),
        Err(e) => verdict(false, e),
    }
}

fn criterion_4() -> Verdict {
    let mut failures = Vec::new();
    let mut special_cases = Vec::new();
    for (name, a) in curated_perturbed() {
        if check_reasonable_structural(&a, DEFAULT_TOL).pass {
            failures.push(format!("{name}: passes structural"));
        }
        match sample_reasonableness_violation(&a, Sampler::SuperadditiveProbes, 1, 0, DEFAULT_TOL).unwrap() {
            None => failures.push(format!("{name}: no violating probe")),
            Some(hit) => {
                if name == "reversed pair" {
                    special_cases.push((hit.observed + 1.0).abs() <= DEFAULT_TOL);
                }
                if name == "zero" {
                    special_cases
                        .push(hit.observed.abs() <= DEFAULT_TOL && hit.lower == 1.0 && hit.upper == 1.0);
                }
            }
        }
    }
    if special_cases != [true, true] {
        failures.push("zero or reversed-pair payoff not as required".into());
    }
    verdict(
        failures.is_empty(),
        format!(
            "10 curated matrices, {} failures{}",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) }
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut failures = Vec::new();
    let mut n5 = Duration::ZERO;
    let mut most_steps = 0;
    for n in 2..=5 {
        let start = Instant::now();
        for seed in 0..100 {
            let (a, _) = polytope_sample(n, seed);
            match peel_decompose(&a, DEFAULT_TOL) {
                Err(e) => failures.push(format!("n = {n} seed {seed}: {e}")),
                Ok((d, trace)) => {
                    most_steps = most_steps.max(trace.steps.len());
                    if trace.steps.len() > step_limit(n) {
                        failures.push(format!("n = {n} seed {seed}: {} steps", trace.steps.len()));
                    }
                    if !verify_decomposition(&a, &d, 1e-9).pass {
                        failures.push(format!("n = {n} seed {seed}: certificate rejected"));
                    }
                }
            }
        }
        if n == 5 {
            n5 = start.elapsed();
        }
    }
    if n5 >= Duration::from_secs(60) {
        failures.push(format!("n = 5 batch took {:.2}s", n5.as_secs_f64()));
    }
    verdict(
        failures.is_empty(),
        format!(
            "400 samples, {} failures, at most {most_steps} steps, n = 5 batch {:.2}s < 60s",
            failures.len(),
            n5.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Verdict {
    let cases = criterion_3_matrices();
    let (mut row_ok, mut all_ok, mut level_ok) = (0, 0, 0);
    let mut example = None;
    for (n, seed, a) in &cases {
        let r = check_abs_sums(a, 1e-9);
        if r.violations_of("row_abs_sum").count() == 0 {
            row_ok += 1;
        }
        if r.pass {
            all_ok += 1;
        } else if example.is_none() {
            let v = r.violations_of("column_abs_sum").next().expect("only columns fail");
            example = Some(format!(
                "n = {n} seed {seed} column {} sums to {:.6}",
                v.coalition.unwrap(),
                v.observed
            ));
        }
        if check_level_abs_sums(a, 1e-9).pass {
            level_ok += 1;
        }
    }
    let total = cases.len();
    let mut v = verdict(
        all_ok == total,
        format!(
            "{all_ok} of {total} pass; rows hold on {row_ok} of {total}; e.g. {}",
            example.unwrap_or_default()
        ),
    );
    v.notes.push(format!("per-cardinality absolute sum = 2 holds on {level_ok} of {total}"));
    v
}

fn embeddings(m: usize, n: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for prefix in embeddings(m - 1, n) {
        for g in (0..n).filter(|g| !prefix.contains(g)) {
            let mut e = prefix.clone();
            e.push(g);
            out.push(e);
        }
    }
    out
}

fn criterion_7() -> Verdict {
    let mut failures = 0;
    let mut truncations = 0;
    for n in 1..=4 {
        for v in enumerate_monotone_binary_games(n).unwrap() {
            for s in v.minimal_sets() {
                truncations += 1;
                if !v.truncate(s).unwrap().is_monotone() {
                    failures += 1;
                }
            }
        }
    }
    let mut rng = rng_from_seed(7);
    let mut super_truncations = 0;
    for k in 0..200 {
        let v = random_superadditive_game(2 + k % 4, &mut rng).unwrap();
        for s in v.minimal_sets() {
            super_truncations += 1;
            if !v.truncate(s).unwrap().is_superadditive() {
                failures += 1;
            }
        }
    }
    let mut extensions = 0;
    for m in 1..=3 {
        for vm in enumerate_monotone_binary_games(m).unwrap() {
            for e in embeddings(m, 4) {
                extensions += 1;
                let vn = vm.extend(4, &e).unwrap();
                if (vm.is_monotone() && !vn.is_monotone())
                    || (vm.is_superadditive() && !vn.is_superadditive())
                {
                    failures += 1;
                }
            }
        }
    }
    verdict(
        failures == 0,
        format!(
            "{truncations} monotone truncations, {super_truncations} superadditive truncations, {extensions} extensions, {failures} failures"
        ),
    )
}

fn criterion_8() -> Verdict {
    let games = enumerate_monotone_binary_games(3).unwrap();
    let mut failures = 0;
    let mut terms_total = 0;
    for v in &games {
        let terms = span_decompose_monotone_binary(v).unwrap();
        terms_total += terms.len();
        let mut sum = vec![0.0; 8];
        for t in &terms {
            if !t.game.is_superadditive() {
                failures += 1;
            }
            for (acc, x) in sum.iter_mut().zip(t.game.values()) {
                *acc += t.coefficient as f64 * x;
            }
        }
        if sum != v.values() {
            failures += 1;
        }
    }
    verdict(
        games.len() == 19 && failures == 0,
        format!("{} games, {terms_total} terms, {failures} failures", games.len()),
    )
}

fn criterion_9() -> Verdict {
    let mut cases: Vec<(String, AllocationMatrix)> =
        curated_perturbed().into_iter().map(|(n, a)| (n.to_string(), a)).collect();
    cases.extend((0..50u64).map(|s| (format!("sample {s}"), polytope_sample(3, 500 + s).0)));
    let mut disagree = Vec::new();
    let mut flagged = 0;
    for (name, a) in &cases {
        let probe = sample_reasonableness_violation(a, Sampler::SuperadditiveProbes, 1, 0, DEFAULT_TOL)
            .unwrap()
            .is_some();
        let monotone = sample_reasonableness_violation(a, Sampler::BinaryExhaustive, 1, 0, DEFAULT_TOL)
            .unwrap()
            .is_some()
            || sample_reasonableness_violation(a, Sampler::MonotoneRandom, 1000, 3, DEFAULT_TOL)
                .unwrap()
                .is_some();
        if probe {
            flagged += 1;
        }
        if probe != monotone {
            disagree.push(name.clone());
        }
    }
    verdict(
        disagree.is_empty() && flagged == 10,
        format!(
            "{} matrices, {flagged} flagged by both, {} disagreements {:?}",
            cases.len(),
            disagree.len(),
            disagree
        ),
    )
}

fn brute_force_count(n: usize) -> usize {
    let width = 1usize << n;
    (0u64..(1 << width))
        .filter(|t| t & 1 == 0)
        .filter(|t| {
            let v = Game::new(n, (0..width).map(|s| ((t >> s) & 1) as f64).collect()).unwrap();
            v.is_monotone()
        })
        .count()
}

fn criterion_10() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, want) in [(1, 2), (2, 5), (3, 19)] {
        let got = enumerate_monotone_binary_games(n).unwrap().len();
        let scan = brute_force_count(n);
        ok &= got == want && scan == want;
        parts.push(format!("n = {n}: {got} enumerated, {scan} scanned"));
    }
    verdict(ok, parts.join("; "))
}

fn criterion_11() -> Verdict {
    let failures: Vec<String> =
        GOLDEN.iter().filter_map(|(name, args, code)| check_golden(name, args, *code).err()).collect();
    let codes: Vec<i32> = GOLDEN.iter().map(|c| c.2).collect();
    let covered = [0, 1, 2].iter().all(|c| codes.contains(c));
    verdict(
        failures.is_empty() && covered,
        format!("{} transcripts run twice, {} mismatches {:?}", GOLDEN.len(), failures.len(), failures),
    )
}

fn main() {
    let strict = std::env::args().any(|a| a == "--strict");
    type Criterion = (u32, &'static str, fn() -> Verdict);
    let criteria: [Criterion; 11] = [
        (1, "Shapley equals the average special allocation", criterion_1),
        (2, "efficiency check agrees with game sums", criterion_2),
        (3, "structural implies reasonable", criterion_3),
        (4, "counterexamples fail structurally and on a probe", criterion_4),
        (5, "peeling round trip", criterion_5),
        (6, "absolute row and column sums", criterion_6),
        (7, "truncation and extension preserve the predicates", criterion_7),
        (8, "spanning decomposition", criterion_8),
        (9, "probe and monotone falsification agree", criterion_9),
        (10, "enumerator counts", criterion_10),
        (11, "CLI transcripts and exit codes", criterion_11),
    ];
    let mut unexpected = Vec::new();
    let mut failed = 0;
    for (k, name, run) in criteria {
        let start = Instant::now();
        let v = run();
        let mark = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {k:>2} {mark}  {name}: {} [{:.2}s]", v.detail, start.elapsed().as_secs_f64());
        for note in &v.notes {
            println!("              note: {note}");
        }
        let known = KNOWN_FALSE.iter().find(|(c, _)| *c == k);
        if let Some((_, why)) = known {
            println!("              known false as stated: {why}");
        }
        if !v.pass {
            failed += 1;
        }
        if v.pass == known.is_some() {
            unexpected.push(k);
        }
    }
    println!("acceptance: {} of 11 pass", 11 - failed);
    if !unexpected.is_empty() {
        println!("acceptance: unexpected result for criteria {unexpected:?}");
        std::process::exit(1);
    }
    if strict && failed > 0 {
        std::process::exit(1);
    }
}
