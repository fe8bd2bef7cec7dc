//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails or exceeds its time budget.
//!
//! Reference numbers marked "oracle" were computed independently of this
//! crate (closed forms evaluated in a separate numerical environment).

use std::path::Path;
use std::time::{Duration, Instant};

use itertools::Itertools;
use multiclass_erm::aggregation::TiePolicy;
use multiclass_erm::constructions::{
    cantor_explicit, properness_witness, random_class, two_constant_class, DEFAULT_EXPLICIT_CAP, STAR,
};
use multiclass_erm::dimensions::{
    ds_dimension, graph_dimension, vc_dimension, verify_ds_witness, verify_graph_witness, DimensionCaps,
};
use multiclass_erm::experiments::{
    emit_reports, run_coupon, run_experiment, run_lower_bound, run_upper_bound, ExperimentConfig, Family,
    LowerBoundThresholds,
};
use multiclass_erm::model::{Example, Hypothesis, Label, TrainingSequence};
use multiclass_erm::properness::{properness_exact, properness_exhaustive, Properness};
use multiclass_erm::reduction::bar_class;
use multiclass_erm::rng::RandomSource;
use multiclass_erm::splitting::{bagging_count, hanneke_split, materialize, Splitter};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_dimension_identities() -> Outcome {
    let caps = DimensionCaps::default();
    let mut seen = Vec::new();
    for (d, n) in [(1usize, 6u32), (2, 8), (3, 10)] {
        let class = cantor_explicit(d, n, DEFAULT_EXPLICIT_CAP).map_err(err)?;
        let g = graph_dimension(&class, &caps).map_err(err)?;
        let ds = ds_dimension(&class, &caps).map_err(err)?;
        check(g.value == d, format!("(d={d}, |X|={n}): graph dimension {} != {d}", g.value))?;
        check(ds.value == 1, format!("(d={d}, |X|={n}): DS dimension {} != 1", ds.value))?;
        check(verify_graph_witness(&class, &g.witness).map_err(err)?, "graph witness does not verify")?;
        check(verify_ds_witness(&class, &ds.witness).map_err(err)?, "DS witness does not verify")?;
        seen.push(format!("({d},{n}): d_G={} d_DS={}", g.value, ds.value));
    }
    Ok(seen.join(", "))
}

fn c2_reduction_identity() -> Outcome {
    let bar_caps = DimensionCaps {
        max_points: 20,
        max_subset: 6,
    };
    let root = RandomSource::new(0x2e);
    let total = 60;
    let mut histogram = [0usize; 5];
    for i in 0..total {
        let mut rng = root.fork(&[i]).rng();
        let points = rng.gen_range(1..=5);
        let labels = rng.gen_range(2..=4);
        let hyps = rng.gen_range(1..=12);
        let class = random_class(points, labels, hyps, &mut rng).map_err(err)?;
        let g = graph_dimension(&class, &DimensionCaps::default()).map_err(err)?.value;
        let vc = vc_dimension(&bar_class(&class).map_err(err)?, &bar_caps).map_err(err)?.value;
        check(vc == g, format!("class {i}: VC(bar) = {vc}, d_G = {g}"))?;
        histogram[g.min(4)] += 1;
    }
    Ok(format!("{total}/{total} classes agree; d_G histogram {histogram:?}"))
}

fn c3_splitters() -> Outcome {
    for (m, want) in [(4, 3), (16, 9), (64, 27)] {
        let got = hanneke_split(m).map_err(err)?.len();
        check(got == want, format!("hanneke_split({m}) has {got} parts, expected {want}"))?;
    }
    fn recurrence(m: usize) -> usize {
        if m <= 3 {
            1
        } else {
            3 * recurrence(m - 3 * (m / 4))
        }
    }
    for m in (1..=10_000).step_by(211).chain([10_000]) {
        check(hanneke_split(m).map_err(err)?.len() == recurrence(m), format!("recurrence fails at m={m}"))?;
    }
    // Oracle: ceil(18 ln(2m/δ)) evaluated independently.
    let grid: [(usize, f64, usize); 20] = [
        (1, 0.5, 25), (2, 0.1, 67), (3, 0.01, 116), (5, 0.05, 96), (10, 0.2, 83),
        (17, 0.3, 86), (50, 0.05, 137), (100, 0.01, 179), (100, 0.1, 137), (250, 0.025, 179),
        (500, 0.001, 249), (1000, 0.05, 191), (1000, 0.9, 139), (2048, 0.07, 198), (5000, 0.0001, 332),
        (10000, 0.5, 191), (10000, 0.01, 262), (31337, 0.33, 219), (100000, 0.05, 274), (1000000, 0.1, 303),
    ];
    for (m, delta, want) in grid {
        check(bagging_count(m, delta) == want, format!("bagging_count({m}, {delta}) != {want}"))?;
    }
    // Index-splitting: a plan is a function of (m, randomness) only, so the
    // parts of any two sequences of the same length pick the same positions.
    let root = RandomSource::new(0x3c);
    for t in 0..100u64 {
        let mut rng = root.fork(&[t]).rng();
        let m = rng.gen_range(3..200);
        let splitter = [Splitter::Hanneke, Splitter::Bagging { rho: 0.3, delta: 0.1 }, Splitter::Three][t as usize % 3];
        let r = root.fork(&[t, 1]);
        let sentinel: TrainingSequence = (0..m).map(|i| Example::new(multiclass_erm::model::Point(i as u32 + 1), Label(0))).collect();
        let s: TrainingSequence = (0..m)
            .map(|_| Example::new(multiclass_erm::model::Point(rng.gen_range(1..50)), Label(rng.gen_range(0..5))))
            .collect();
        let s2: TrainingSequence = (0..m)
            .map(|_| Example::new(multiclass_erm::model::Point(rng.gen_range(1..50)), Label(rng.gen_range(0..5))))
            .collect();
        let plan_a = splitter.plan(s.len(), &r).map_err(err)?;
        let plan_b = splitter.plan(s2.len(), &r).map_err(err)?;
        check(plan_a == plan_b, format!("trial {t}: plans differ between equal-length sequences"))?;
        let idx = materialize(&plan_a, &sentinel).map_err(err)?;
        let parts = materialize(&plan_a, &s).map_err(err)?;
        let parts2 = materialize(&plan_b, &s2).map_err(err)?;
        for ((pi, p), p2) in idx.iter().zip(&parts).zip(&parts2) {
            for ((e_idx, e), e2) in pi.iter().zip(p.iter()).zip(p2.iter()) {
                let pos = e_idx.point.index();
                check(*e == s.examples()[pos] && *e2 == s2.examples()[pos], format!("trial {t}: value-dependent split"))?;
            }
        }
    }
    Ok("hanneke 3/9/27 and recurrence to 10^4; 20/20 bagging counts; 100/100 index-splitting checks".into())
}

fn c4_lift_inequality() -> Outcome {
    let mut config = ExperimentConfig::parse(
        "family = cantor\nd = 3\ndomain_size = 15\nexplicit = true\nmarginal = geometric:0.7\n\
         splitters = hanneke,bagging,three\nrho = 0.5\ntie = first-voter\nm = 8,32,128\ntrials = 56\nseed = 4\n",
    )
    .map_err(err)?;
    let mut total = 0;
    let mut violations = 0;
    let mut strict = 0;
    for tie in [TiePolicy::FirstVoter, TiePolicy::Idk] {
        config.tie = tie;
        for r in run_experiment(&config).map_err(err)? {
            total += r.records.len();
            violations += r.lemma_violations;
            strict += r.records.iter().filter(|t| t.majority_error < t.lifted_error).count();
        }
    }
    check(total >= 500, format!("only {total} trials"))?;
    check(violations == 0, format!("{violations} violations in {total} trials"))?;
    Ok(format!("0 violations in {total} trials ({strict} strict)"))
}

fn lower_bound_config(m: usize, splitter: &str) -> Result<ExperimentConfig, String> {
    ExperimentConfig::parse(&format!(
        "family = cantor\nd = 10\nepsilon = 0.01\nlearner = bad\nsplitters = {splitter}\nm = {m}\ntrials = 200\nseed = 2024\n"
    ))
    .map_err(err)
}

fn c5_majority_lower_bound() -> Outcome {
    let config = lower_bound_config(62, "three")?;
    check(matches!(config.family, Family::Cantor { domain_size: 250, .. }), "domain size is not 250")?;
    let result = run_lower_bound(&config).map_err(err)?.remove(0);
    let eps = config.epsilon;
    let failing: Vec<_> = result.records.iter().filter(|r| r.majority_error > eps).collect();
    let p = failing.len() as f64 / result.records.len() as f64;
    check(p >= 0.4, format!("P[maj error > ε] = {p}"))?;
    check(failing.iter().all(|r| r.list_error > eps), "a failing trial has list error <= ε")?;
    Ok(format!(
        "P[maj error > ε] = {p:.3} over {} trials; list error > ε in all {} failing trials",
        result.records.len(),
        failing.len()
    ))
}

fn c6_single_erm_lower_bound() -> Outcome {
    let t = LowerBoundThresholds::new(10, 0.01, 0.05);
    // Oracle: d ln(1/(8 e^{√2} ε)) / (4ε) at d=10, ε=0.01.
    check((t.single_erm - 277.8787704837901).abs() < 1e-9, format!("threshold {}", t.single_erm))?;
    let config = lower_bound_config(250, "none")?;
    let result = run_lower_bound(&config).map_err(err)?.remove(0);
    let p = result.records.iter().filter(|r| r.majority_error >= 2.0 * config.epsilon).count() as f64
        / result.records.len() as f64;
    check(p >= 0.4, format!("P[error >= 2ε] = {p}"))?;
    Ok(format!("P[error >= 2ε] = {p:.3} at m=250 < {:.2}", t.single_erm))
}

fn c7_coupon() -> Outcome {
    let config = ExperimentConfig::parse("d = 10\nepsilon = 0.01\nm = 1\ntrials = 10000\nseed = 77\n").map_err(err)?;
    let (stats, _) = run_coupon(&config).map_err(err)?;
    // Oracles: 250·Σ_{i=11}^{250} 1/i and 250·ln(251/11).
    let exact = 792.926748866081;
    let lower = 781.8894165833533;
    check((stats.exact_mean - exact).abs() < 1e-9, "closed-form mean disagrees with oracle")?;
    let rel = (stats.mean - exact).abs() / exact;
    check(rel < 0.02, format!("mean {} is {:.2}% off", stats.mean, rel * 100.0))?;
    check(stats.mean >= lower, format!("mean {} below {lower}", stats.mean))?;
    check(stats.variance <= 2.0 * 250.0 * 250.0 / 10.0, format!("variance {}", stats.variance))?;
    Ok(format!(
        "mean {:.2} (exact {exact:.2}, {:.2}% off, bound {lower:.2}); variance {:.0} <= 12500",
        stats.mean,
        rel * 100.0,
        stats.variance
    ))
}

fn c8_upper_bound_rate() -> Outcome {
    let config = ExperimentConfig::parse(
        "family = cantor\nd = 3\ndomain_size = 15\nexplicit = true\nmarginal = geometric:0.5\n\
         learner = bad\nsplitters = hanneke,three\nm = 48,96,192,384\ntrials = 300\nseed = 8\n",
    )
    .map_err(err)?;
    let (results, checks) = run_upper_bound(&config).map_err(err)?;
    check(results.iter().all(|r| r.graph_dimension == Some(3)), "graph dimension is not 3")?;
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for c in &checks {
        let line = format!(
            "{}: medians {:?} ratios {:?} ĉ {:?} spread {:.2}",
            c.splitter.name(),
            c.medians.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>(),
            c.ratios.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            c.fitted_constants.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            c.top_half_spread
        );
        if !c.decays_by(0.7) || !c.top_half_spread.is_finite() || c.top_half_spread >= 2.0 {
            failures.push(line.clone());
        }
        lines.push(line);
    }
    if failures.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn c9_properness() -> Outcome {
    // Members have properness 1.
    let root = RandomSource::new(0x9a);
    let mut members = 0;
    let mut compared = 0;
    for i in 0..200u64 {
        let mut rng = root.fork(&[i]).rng();
        let class = random_class(rng.gen_range(1..=6), rng.gen_range(2..=4), rng.gen_range(1..=12), &mut rng).map_err(err)?;
        if i < 40 {
            for h in class.hypotheses() {
                check(properness_exact(&h, &class).map_err(err)?.value == Properness::Finite(1), "member with properness != 1")?;
                members += 1;
            }
        }
        let f = Hypothesis::table((0..class.domain_size()).map(|_| Label(rng.gen_range(0..class.labels().len() as u64))).collect());
        let a = properness_exact(&f, &class).map_err(err)?;
        let b = properness_exhaustive(&f, &class).map_err(err)?;
        check(a.value == b.value, format!("instance {i}: branch and bound {} vs exhaustive {}", a.value, b.value))?;
        compared += 1;
    }
    // Two constants: every non-constant binary function needs both.
    let two = two_constant_class(5).map_err(err)?;
    for mask in 1..31u64 {
        let f = Hypothesis::table((0..5).map(|i| Label(mask >> i & 1)).collect());
        check(properness_exact(&f, &two).map_err(err)?.value == Properness::Finite(2), format!("mask {mask}"))?;
    }
    // Witness block d=4: any f assembled from p hypotheses emits * on at most
    // p·√d = 2p points, and its properness is at least (#*)/√d.
    let w = properness_witness(4).map_err(err)?;
    let mut assembled = 0;
    for p in 1..=3 {
        for chosen in (0..w.class.len()).combinations(p) {
            let choices: Vec<Vec<Label>> = (0..4)
                .map(|x| chosen.iter().map(|&i| w.class.row(i)[x]).unique().collect())
                .collect();
            for f in choices.iter().multi_cartesian_product() {
                let stars = f.iter().filter(|&&&l| l == STAR).count();
                check(stars <= 2 * p, format!("{p} hypotheses give {stars} stars"))?;
                let h = Hypothesis::table(f.into_iter().copied().collect());
                let prop = properness_exact(&h, &w.class).map_err(err)?.value.finite().unwrap_or(usize::MAX);
                check(2 * prop >= stars, "properness below the star bound")?;
                assembled += 1;
            }
        }
    }
    Ok(format!(
        "{members} members at 1; 30 non-constant functions at 2; {compared}/{compared} exact = exhaustive; {assembled} assembled functions within 2p stars"
    ))
}

fn c10_determinism() -> Outcome {
    let config = ExperimentConfig::parse(
        "family = cantor\nd = 4\nepsilon = 0.02\nsplitters = none,hanneke,bagging,three\nm = 10,40\ntrials = 25\nseed = 10\n",
    )
    .map_err(err)?;
    let dir = tempfile::tempdir().map_err(err)?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    emit_reports(&run_experiment(&config).map_err(err)?, &a).map_err(err)?;
    emit_reports(&run_experiment(&config).map_err(err)?, &b).map_err(err)?;
    let mut files = 0;
    for s in &config.splitters {
        for f in ["records.csv", "summary.json"] {
            let read = |root: &Path| std::fs::read(root.join(s.name()).join(f)).map_err(err);
            check(read(&a)? == read(&b)?, format!("{}/{f} differs", s.name()))?;
            files += 1;
        }
    }
    let rows = std::fs::read_to_string(a.join("three/records.csv")).map_err(err)?.lines().count() - 1;
    check(rows == 2 * 25 * 4, format!("records.csv has {rows} rows"))?;
    Ok(format!("{files} files byte-identical across reruns"))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "dimension identities", Duration::from_secs(30), c1_dimension_identities),
        (2, "reduction identity", Duration::from_secs(60), c2_reduction_identity),
        (3, "splitter structure", Duration::from_secs(10), c3_splitters),
        (4, "lifted-majority inequality", Duration::from_secs(120), c4_lift_inequality),
        (5, "lower bound, majority regime", Duration::from_secs(60), c5_majority_lower_bound),
        (6, "lower bound, single ERM", Duration::from_secs(60), c6_single_erm_lower_bound),
        (7, "coupon collector", Duration::from_secs(30), c7_coupon),
        (8, "upper-bound rate", Duration::from_secs(300), c8_upper_bound_rate),
        (9, "properness", Duration::from_secs(120), c9_properness),
        (10, "determinism", Duration::from_secs(60), c10_determinism),
    ];
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time budget of {budget:?}: {d}")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2} {status} [{name}] ({:.2}s) {detail}", elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
