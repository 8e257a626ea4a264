//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL
//! line per criterion and exits non-zero if any failed.

mod common;

use std::cell::LazyCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{draw_set, index_sets, shapes, small_noiseless};
use rand::Rng;
use seqmusic::analysis::{
    bound_report, f_alpha, feasibility_gap, filtering_region, sigma_k_profile, Region,
    SigmaKProfileConfig,
};
use seqmusic::bench::{run_sweep, run_sweep_to, ExperimentConfig, Family, SweepResult};
use seqmusic::problem::{gen_gaussian_sensing, gen_ground_truth, synthesize};
use seqmusic::recovery::Algorithm;
use seqmusic::seed::{mix, rng_from_seed};
use seqmusic::subspace::{
    augmented_rank, concat_columns, principal_subspace, residual_energy, subspace_distance,
    Subspace,
};

/// Relative rank tolerance of the noiseless rank checks.
const RANK_TOL: f64 = 1e-8;
/// Residual energy below which an atom counts as inside the augmented subspace.
const RESIDUAL_TOL: f64 = 1e-10;
/// Index sets per instance above which the rank check samples instead of enumerating.
const RANK_SET_CAP: usize = 20_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn rank_identity() -> Outcome {
    let (mut checked, mut bad, mut sampled) = (0usize, 0usize, 0usize);
    let mut first_bad = String::new();
    for seed in 0..200u64 {
        let inst = small_noiseless(seed);
        let (k, r, l) = (inst.k, inst.r, inst.l);
        let admissible = shapes(&inst, k - r, (2 * (k - r) + l).min(k), k - r + l);
        let (sets, exhaustive) = index_sets(&inst, &admissible, RANK_SET_CAP, mix(seed, 7));
        sampled += usize::from(!exhaustive);
        for set in sets {
            let inside = set.iter().filter(|i| inst.support.contains(i)).count();
            let q = inside - (k - r);
            let expected = set.len() + r - q;
            let got = augmented_rank(inst.a.matrix(), &set, &inst.b, RANK_TOL).unwrap();
            checked += 1;
            if got != expected {
                bad += 1;
                if first_bad.is_empty() {
                    first_bad =
                        format!(" first mismatch: seed {seed} I={set:?} rank {got} != {expected}");
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("{checked} index sets on 200 instances ({sampled} sampled), {bad} mismatches{first_bad}"),
    )
}

fn inside_augmented(inst: &common::Noiseless, set: &[usize], j: usize) -> bool {
    let aug = concat_columns(inst.a.matrix(), set, &inst.b).unwrap();
    let span = Subspace::column_space(&aug, RANK_TOL).unwrap();
    residual_energy(&span, &inst.a.matrix().column(j).into_owned()).unwrap() < RESIDUAL_TOL
}

fn criterion_equivalence() -> Outcome {
    let (mut decisions, mut disagree, mut wrong) = (0usize, 0usize, 0usize);
    for seed in 0..50u64 {
        let inst = small_noiseless(1000 + seed);
        let (k, r, l) = (inst.k, inst.r, inst.l);
        let outside = inst.outside();
        let mut rng = rng_from_seed(mix(seed, 0xF0));
        let rank = |set: &[usize]| augmented_rank(inst.a.matrix(), set, &inst.b, RANK_TOL).unwrap();
        let forward = shapes(
            &inst,
            k - r,
            (2 * (k - r) + l - 1).min(k - 1),
            k - r + l - 1,
        );
        let backward = shapes(&inst, k - r + 1, (2 * (k - r) + l).min(k), k - r + l);
        for _ in 0..10 {
            if !forward.is_empty() {
                let (a, b) = forward[rng.random_range(0..forward.len())];
                let set = draw_set(&mut rng, &inst.support, &outside, a, b);
                let base = rank(&set);
                for j in (0..inst.n).filter(|j| !set.contains(j)) {
                    let mut grown = set.clone();
                    grown.push(j);
                    let by_rank = rank(&grown) == base;
                    let by_residual = inside_augmented(&inst, &set, j);
                    decisions += 1;
                    disagree += usize::from(by_rank != by_residual);
                    wrong += usize::from(by_rank != inst.support.contains(&j));
                }
            }
            let (a, b) = backward[rng.random_range(0..backward.len())];
            let set = draw_set(&mut rng, &inst.support, &outside, a, b);
            let base = rank(&set);
            for &j in &set {
                let rest: Vec<usize> = set.iter().copied().filter(|&i| i != j).collect();
                let by_rank = rank(&rest) == base;
                let by_residual = inside_augmented(&inst, &rest, j);
                decisions += 1;
                disagree += usize::from(by_rank != by_residual);
                wrong += usize::from(by_rank != inst.support.contains(&j));
            }
        }
    }
    outcome(
        disagree == 0,
        format!("{decisions} candidate decisions, {disagree} rank/residual disagreements, {wrong} differ from the true support"),
    )
}

fn noiseless_recovery() -> Outcome {
    let cfg = ExperimentConfig {
        m: vec![30],
        snapshots: vec![16],
        snr_db: f64::INFINITY,
        trials: 100,
        algorithms: vec![Algorithm::SeqCsMusic],
        ..Default::default()
    };
    let res = run_sweep(&cfg, workers()).unwrap();
    let rate = res.row(Algorithm::SeqCsMusic, 30, 16).unwrap().success_rate;
    outcome(
        rate >= 0.99,
        format!("success rate {rate:.3} (need >= 0.99)"),
    )
}

/// Paired difference check: `better - worse >= -2 SE` with the standard
/// errors of the two rates combined in quadrature. Returns the margin in
/// rate points and whether it held.
fn not_worse(
    res: &SweepResult,
    better: Algorithm,
    worse: Algorithm,
    m: usize,
    n: usize,
) -> (f64, bool) {
    let b = res.row(better, m, n).unwrap();
    let w = res.row(worse, m, n).unwrap();
    let se = (b.stderr.powi(2) + w.stderr.powi(2)).sqrt();
    let diff = b.success_rate - w.success_rate;
    (diff, diff >= -2.0 * se)
}

const DIRECTION_M: [usize; 4] = [16, 20, 24, 28];

fn gaussian_ablation() -> SweepResult {
    let cfg = ExperimentConfig {
        m: DIRECTION_M.to_vec(),
        snapshots: vec![6, 16],
        snr_db: 30.0,
        trials: 200,
        algorithms: vec![
            Algorithm::SeqCsMusic,
            Algorithm::SeqNoFilter,
            Algorithm::CsMusic,
        ],
        ..Default::default()
    };
    run_sweep(&cfg, workers()).unwrap()
}

fn rates(res: &SweepResult, alg: Algorithm, n: usize) -> String {
    let r: Vec<String> = DIRECTION_M
        .iter()
        .map(|&m| format!("{:.3}", res.row(alg, m, n).unwrap().success_rate))
        .collect();
    format!("{}@N={n} [{}]", alg.name(), r.join(" "))
}

fn snapshot_robustness(res: &SweepResult) -> Outcome {
    let mut all_ok = true;
    let mut wins = 0;
    for m in DIRECTION_M {
        let (diff, ok) = not_worse(res, Algorithm::SeqCsMusic, Algorithm::CsMusic, m, 6);
        all_ok &= ok;
        wins += usize::from(diff >= 0.05);
    }
    outcome(
        all_ok && wins >= 2,
        format!(
            "{}; {}; >= 5 points better at {wins}/4 m values",
            rates(res, Algorithm::SeqCsMusic, 6),
            rates(res, Algorithm::CsMusic, 6)
        ),
    )
}

fn ablation(res: &SweepResult) -> Outcome {
    let mut ok = true;
    for m in DIRECTION_M {
        ok &= not_worse(res, Algorithm::SeqNoFilter, Algorithm::CsMusic, m, 6).1;
    }
    let mut strictly = false;
    for n in [6, 16] {
        for m in DIRECTION_M {
            let (diff, held) = not_worse(res, Algorithm::SeqCsMusic, Algorithm::SeqNoFilter, m, n);
            ok &= held;
            strictly |= diff > 0.0;
        }
    }
    outcome(
        ok && strictly,
        format!(
            "{}; {}; {}; {}; {}",
            rates(res, Algorithm::SeqCsMusic, 6),
            rates(res, Algorithm::SeqNoFilter, 6),
            rates(res, Algorithm::CsMusic, 6),
            rates(res, Algorithm::SeqCsMusic, 16),
            rates(res, Algorithm::SeqNoFilter, 16)
        ),
    )
}

fn perturbation_bound() -> Outcome {
    let (n, k, r, m, snapshots) = (128, 8, 4, 24, 16);
    let (mut feasible, mut held, mut worst) = (0usize, 0usize, 0.0f64);
    let mut seed = 0u64;
    while feasible < 100 && seed < 1000 {
        let mut rng = rng_from_seed(mix(seed, 0xA));
        let a = gen_gaussian_sensing(m, n, 0.0, mix(seed, 1)).unwrap();
        let gt = gen_ground_truth::<f64>(n, k, r, snapshots, 1.0, mix(seed, 2)).unwrap();
        let snr = rng.random_range(15.0..40.0);
        let ens = synthesize(&a, &gt, snr, mix(seed, 3)).unwrap();
        seed += 1;
        let s = principal_subspace(&ens.clean, r).unwrap();
        let s_tilde = principal_subspace(&ens.y, r).unwrap();
        let l = rng.random_range(0..r);
        let picks = rand::seq::index::sample(&mut rng, k, k - r + l);
        let indices: Vec<usize> = picks.into_iter().map(|i| gt.support[i]).collect();
        let report = bound_report(a.matrix(), &indices, &s, &s_tilde, k).unwrap();
        let Some(bound) = report.bound else { continue };
        feasible += 1;
        let u1 = principal_subspace(&concat_columns(a.matrix(), &indices, s.basis()).unwrap(), k)
            .unwrap();
        let u1_tilde = principal_subspace(
            &concat_columns(a.matrix(), &indices, s_tilde.basis()).unwrap(),
            k,
        )
        .unwrap();
        let dist = subspace_distance(&u1, &u1_tilde).unwrap();
        held += usize::from(dist <= bound);
        worst = worst.max(dist / bound);
    }
    outcome(
        feasible == 100 && held == feasible,
        format!("{held}/{feasible} feasible instances within the bound ({seed} drawn), max distance/bound {worst:.3}"),
    )
}

fn sigma_k_monotone() -> Outcome {
    let rows = sigma_k_profile(&SigmaKProfileConfig::default()).unwrap();
    let means: Vec<f64> = rows.iter().map(|r| r.mean).collect();
    let ok = means.len() == 6 && means.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = means.iter().map(|m| format!("{m:.4}")).collect();
    outcome(
        ok,
        format!("mean sigma_k for l = 0..5: [{}]", shown.join(", ")),
    )
}

fn f_endpoints() -> Outcome {
    let f1 = f_alpha(1.0).unwrap();
    let f0 = f_alpha(1e-6).unwrap();
    let grid: Vec<f64> = (1..=100)
        .map(|i| f_alpha(i as f64 / 100.0).unwrap())
        .collect();
    let monotone = grid.windows(2).all(|w| w[1] > w[0]);
    outcome(
        (f1 - 1.0).abs() <= 1e-8 && f0 < 1e-3 && monotone,
        format!(
            "F(1) = {f1:.12}, F(1e-6) = {f0:.3e}, strictly increasing on 100 points: {monotone}"
        ),
    )
}

fn gap_spot_value() -> Outcome {
    let f = feasibility_gap(0.25, 1.0).unwrap();
    let region = filtering_region(0.25, 1.0).unwrap();
    outcome(
        (f + 0.25).abs() <= 1e-10 && region == Region::FilteringFavored,
        format!("f(0.25, 1) = {f:.12}, region {}", region.name()),
    )
}

fn fourier_direction() -> Outcome {
    let cfg = ExperimentConfig {
        family: Family::Fourier,
        m: vec![16, 24],
        snapshots: vec![5],
        snr_db: 30.0,
        trials: 200,
        algorithms: vec![Algorithm::SeqCsMusic, Algorithm::CsMusic],
        ..Default::default()
    };
    let res = run_sweep(&cfg, workers()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [16, 24] {
        let (diff, held) = not_worse(&res, Algorithm::SeqCsMusic, Algorithm::CsMusic, m, 5);
        ok &= held;
        parts.push(format!(
            "m={m}: seq {:.3} cs {:.3} (diff {diff:+.3})",
            res.row(Algorithm::SeqCsMusic, m, 5).unwrap().success_rate,
            res.row(Algorithm::CsMusic, m, 5).unwrap().success_rate
        ));
    }
    outcome(ok, parts.join("; "))
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig {
        m: vec![6, 12, 18, 24],
        snapshots: vec![6, 16],
        trials: 25,
        master_seed: 42,
        algorithms: Algorithm::ALL.to_vec(),
        ..Default::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: usize, name: &str| {
        let path = dir.path().join(name);
        run_sweep_to(&cfg, workers, &path).unwrap();
        std::fs::read(&path).unwrap()
    };
    let one = run(1, "w1.csv");
    let eight = run(8, "w8.csv");
    let again = run(1, "w1b.csv");
    outcome(
        one == eight && one == again && !one.is_empty(),
        format!(
            "{} bytes; 1 vs 8 workers identical: {}; repeat identical: {}",
            one.len(),
            one == eight,
            one == again
        ),
    )
}

fn main() -> ExitCode {
    // criteria 4 and 5 read the same sweep; its cost is charged to the first
    let ablation_run = LazyCell::new(gaussian_ablation);
    let criteria: Vec<(&str, Duration, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (
            "rank identity",
            Duration::from_secs(30),
            Box::new(rank_identity),
        ),
        (
            "forward/backward criterion equivalence",
            Duration::from_secs(30),
            Box::new(criterion_equivalence),
        ),
        (
            "noiseless exact recovery",
            Duration::from_secs(60),
            Box::new(noiseless_recovery),
        ),
        (
            "snapshot robustness at N = 6",
            Duration::from_secs(600),
            Box::new(|| snapshot_robustness(&ablation_run)),
        ),
        (
            "filtering ablation",
            Duration::from_secs(900),
            Box::new(|| ablation(&ablation_run)),
        ),
        (
            "subspace perturbation bound",
            Duration::from_secs(60),
            Box::new(perturbation_bound),
        ),
        (
            "sigma_k profile monotone",
            Duration::from_secs(30),
            Box::new(sigma_k_monotone),
        ),
        (
            "F(alpha) endpoints",
            Duration::from_secs(5),
            Box::new(f_endpoints),
        ),
        (
            "feasibility gap spot value",
            Duration::from_secs(1),
            Box::new(gap_spot_value),
        ),
        (
            "Fourier direction",
            Duration::from_secs(300),
            Box::new(fourier_direction),
        ),
        (
            "sweep determinism",
            Duration::from_secs(600),
            Box::new(determinism),
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= budget;
        failed += usize::from(!pass);
        println!(
            "{} {:>2}. {name}: {} [{:.1}s, budget {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
