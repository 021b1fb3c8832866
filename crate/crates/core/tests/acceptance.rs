//! Acceptance criteria. Runs as a plain binary and prints one line per
//! criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use kmatch_stream::dynamic::EdgeUpdate;
use kmatch_stream::harness::{
    gen_random_inserts, measure, run_trials, sub_rng, Algorithm, Engine, PlantedConfig, TrialConfig, TrialReport,
    Workload,
};
use kmatch_stream::hash::UniversalHash;
use kmatch_stream::insert_only::{compact, red_com, window_len, CopyState};
use kmatch_stream::matching::{
    enumerate_oracle, is_valid_k_matching, max_nice_matching, solve_exact, Edge, SmallGraph, Vertex,
};
use kmatch_stream::partition::{check_interval_properties, separation_witness, HashScheme};
use kmatch_stream::sampler::{L0Sampler, SampleOutcome};
use kmatch_stream::stream::{Record, StreamModel};

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn toolkit_witness() -> Outcome {
    let start = Instant::now();
    let trials = 2000u64;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sub_rng(SEED, 101, t);
            let scheme = HashScheme::build(4096, 8, &mut rng).expect("valid parameters");
            let subset: Vec<u64> = sample(&mut rng, 4096, 8).into_iter().map(|x| x as u64).collect();
            let r = separation_witness(&subset, &scheme);
            (r.witness.is_some() && r.verified == Some(true)) as u64
        })
        .sum();
    let rate = hits as f64 / trials as f64;
    let elapsed = start.elapsed();
    outcome(
        rate >= 0.98 && elapsed < Duration::from_secs(60),
        format!("witness rate {rate:.4} over {trials} trials (>= 0.98), {} (< 60s)", secs(elapsed)),
    )
}

fn interval_properties() -> Outcome {
    let mut checked = 0;
    let mut dirty = 0;
    for k in 2..=4u64 {
        for s in 0..4 {
            let scheme = HashScheme::build(512, k, &mut sub_rng(SEED, 102, k * 10 + s)).expect("valid parameters");
            let r = check_interval_properties(&scheme);
            checked += 1;
            dirty += (!r.is_clean()) as u32;
        }
    }
    outcome(dirty == 0, format!("{checked} schemes over k in {{2,3,4}}, |U| = 512, {dirty} with violations"))
}

fn l0_sampler() -> Outcome {
    let domain = 1u64 << 20;
    let delta = 1.0 / 1024.0;
    let runs = 10_000u64;

    let single_ok = (0..1000u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = sub_rng(SEED, 103, t);
            let mut s = L0Sampler::new(domain, delta, &mut rng).unwrap();
            let id = rng.gen_range(0..domain);
            let c = rng.gen_range(1..5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            s.update(id, c).unwrap();
            s.query() == SampleOutcome::Sampled(id)
        })
        .count();

    let cancel_ok = (0..1000u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = sub_rng(SEED, 104, t);
            let mut s = L0Sampler::new(domain, delta, &mut rng).unwrap();
            let ids: Vec<u64> = (0..rng.gen_range(1..40)).map(|_| rng.gen_range(0..domain)).collect();
            ids.iter().for_each(|&i| {
                s.update(i, 1).unwrap();
            });
            ids.iter().rev().for_each(|&i| {
                s.update(i, -1).unwrap();
            });
            s.query() == SampleOutcome::Empty
        })
        .count();

    let support: Vec<u64> = {
        let mut rng = sub_rng(SEED, 105, 0);
        sample(&mut rng, domain as usize, 64).into_iter().map(|x| x as u64).collect()
    };
    let results: Vec<SampleOutcome> = (0..runs)
        .into_par_iter()
        .map(|t| {
            let mut s = L0Sampler::new(domain, delta, &mut sub_rng(SEED, 106, t)).unwrap();
            support.iter().for_each(|&i| {
                s.update(i, 1).unwrap();
            });
            s.query()
        })
        .collect();
    let mut counts: BTreeMap<u64, u64> = support.iter().map(|&i| (i, 0)).collect();
    let mut fails = 0u64;
    let mut foreign = 0u64;
    for r in &results {
        match r {
            SampleOutcome::Sampled(id) => match counts.get_mut(id) {
                Some(c) => *c += 1,
                None => foreign += 1,
            },
            _ => fails += 1,
        }
    }
    let sampled = runs - fails;
    let expect = sampled as f64 / 64.0;
    let (lo, hi) = (counts.values().min().copied().unwrap(), counts.values().max().copied().unwrap());
    let uniform = lo as f64 >= 0.5 * expect && hi as f64 <= 1.5 * expect;
    let fail_rate = fails as f64 / runs as f64;
    let pass = single_ok == 1000 && cancel_ok == 1000 && foreign == 0 && uniform && fail_rate <= 2.0 * delta;
    outcome(
        pass,
        format!(
            "single-support {single_ok}/1000, cancel {cancel_ok}/1000, support-64 counts in [{lo}, {hi}] \
             (allowed [{:.0}, {:.0}]), foreign {foreign}, fail rate {fail_rate:.5} (<= {:.5})",
            0.5 * expect,
            1.5 * expect,
            2.0 * delta
        ),
    )
}

const DYN_N: u64 = 50;
const DYN_W: u64 = 5;
const DYN_M: usize = 400;
const DYN_DEL: f64 = 0.45;
const DYN_TRIALS: usize = 200;
const DYN_EMPTY_TRIALS: usize = 50;

fn dynamic_reports(algorithm: Algorithm) -> Vec<(usize, TrialReport, TrialReport)> {
    (1..=4)
        .map(|k| {
            let planted = TrialConfig {
                algorithm,
                workload: Workload::Planted(PlantedConfig::new(DYN_N, k, DYN_W, DYN_M, DYN_DEL, StreamModel::Dynamic)),
                trials: DYN_TRIALS,
                seed: SEED ^ k as u64,
            };
            let empty = TrialConfig {
                algorithm,
                workload: Workload::NoMatching { n: DYN_N, k, weights: DYN_W, m: DYN_M, del_rate: DYN_DEL },
                trials: DYN_EMPTY_TRIALS,
                seed: SEED ^ (k as u64) << 8,
            };
            (k, run_trials(&planted).unwrap(), run_trials(&empty).unwrap())
        })
        .collect()
}

fn dynamic_exact(reports: &[(usize, TrialReport, TrialReport)], elapsed: Duration) -> Outcome {
    let mut pass = elapsed < Duration::from_secs(300);
    let mut parts = Vec::new();
    let mut violations = 0;
    for (k, planted, empty) in reports {
        pass &= planted.success_rate() >= 0.95;
        violations += planted.one_sided_violations + empty.one_sided_violations + empty.answered;
        parts.push(format!("k={k}: {}/{}", planted.successes, planted.with_matching));
        pass &= empty.with_matching == 0;
    }
    pass &= violations == 0;
    outcome(
        pass,
        format!(
            "success {} (>= 95% each), one-sided violations {violations} incl. {} no-matching streams, {} (< 300s)",
            parts.join(", "),
            4 * DYN_EMPTY_TRIALS,
            secs(elapsed)
        ),
    )
}

fn dynamic_approx(reports: &[(usize, TrialReport, TrialReport)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut class_fail = 0;
    let mut violations = 0;
    let mut max_classes = 0;
    for (k, planted, empty) in reports {
        pass &= planted.answered_success_rate() >= 0.95;
        class_fail += planted.class_bound_failures + empty.class_bound_failures;
        violations += planted.one_sided_violations + empty.one_sided_violations;
        max_classes = max_classes.max(planted.max_classes_seen);
        parts.push(format!("k={k}: {}/{}", planted.successes, planted.answered));
    }
    pass &= class_fail == 0 && violations == 0;
    outcome(
        pass,
        format!(
            "true weight > 0.9 OPT in {} (>= 95% each), class bound exceeded {class_fail}, \
             max classes {max_classes}, one-sided violations {violations}",
            parts.join(", ")
        ),
    )
}

fn reduced_subgraph() -> Outcome {
    let k = 2;
    let agree = (0..500u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = sub_rng(SEED, 107, t);
            let stream = gen_random_inserts(30, k, 10, 100, &mut rng).unwrap();
            let h: Vec<Edge> = stream.updates().map(EdgeUpdate::edge).collect();
            let f = UniversalHash::draw(30, 4 * (k * k) as u64, &mut rng).unwrap();
            let part = |x: Vertex| f.eval(x as u64).unwrap();
            let full = max_nice_matching(&SmallGraph::new(compact(&h, &f)).unwrap(), part, k);
            let reduced = max_nice_matching(&SmallGraph::new(red_com(&h, &f, k)).unwrap(), part, k);
            full.map(|m| m.weight()) == reduced.map(|m| m.weight())
        })
        .count();
    outcome(agree == 500, format!("{agree}/500 instances agree on nice-matching existence and weight"))
}

fn insert_only(reports: &[(f64, TrialReport)]) -> Outcome {
    let single = &reports[0].1;
    let amplified = &reports[1].1;
    let violations: usize = reports.iter().map(|r| r.1.one_sided_violations).sum();
    let pass = single.success_rate() >= 0.45 && amplified.success_rate() >= 0.90 && violations == 0;
    outcome(
        pass,
        format!(
            "single copy {:.3} (>= 0.45), 4 copies {:.3} (>= 0.90), one-sided violations {violations}",
            single.success_rate(),
            amplified.success_rate()
        ),
    )
}

/// Replays `edges` into a copy and compares every finished reduction and every
/// view against the recursion evaluated from scratch.
fn stagger_mismatches(edges: &[Edge], k: usize, f: UniversalHash, n: u64) -> (u64, u64) {
    let q = window_len(k);
    let mut copy = CopyState::with_hash(n, k, f);
    // reference[j] is the reduced subgraph at position j*q
    let mut reference: Vec<Vec<Edge>> = vec![Vec::new(), Vec::new()];
    let (mut windows, mut mismatches) = (0, 0);
    for (idx, e) in edges.iter().enumerate() {
        copy.update(*e).unwrap();
        let i = idx + 1;
        if i % q == 0 {
            let j = i / q;
            if j >= 2 {
                let mut input = reference[j - 1].clone();
                input.extend_from_slice(&edges[(j - 2) * q..(j - 1) * q]);
                let next = red_com(&input, &f, k);
                windows += 1;
                mismatches += (copy.task().output() != Some(&next[..])) as u64;
                reference.push(next);
            } else {
                windows += 1;
                mismatches += (copy.task().output() != Some(&[][..])) as u64;
            }
        }
        let hat = (i - 1) / q;
        let star = hat.saturating_sub(1);
        let mut expect: Vec<Edge> = reference[hat].clone();
        expect.extend_from_slice(&edges[star * q..i]);
        let view: Vec<Edge> = copy.view().copied().collect();
        mismatches += (view != expect) as u64;
    }
    (windows, mismatches)
}

fn staggering() -> Outcome {
    let results: Vec<(u64, u64)> = (0..24u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = sub_rng(SEED, 108, t);
            let k = 1 + (t % 3) as usize;
            let n = 300;
            let m = rng.gen_range(1..=10_000);
            let stream = gen_random_inserts(n, k, 1 + t % 20, m, &mut rng).unwrap();
            let edges: Vec<Edge> = stream.updates().map(EdgeUpdate::edge).collect();
            let f = UniversalHash::draw(n, 4 * (k * k) as u64, &mut rng).unwrap();
            stagger_mismatches(&edges, k, f, n)
        })
        .collect();
    let windows: u64 = results.iter().map(|r| r.0).sum();
    let mismatches: u64 = results.iter().map(|r| r.1).sum();
    outcome(mismatches == 0, format!("{windows} windows on 24 streams (m <= 10^4), {mismatches} mismatches"))
}

struct Budgets {
    insert_max: Vec<(usize, u64, u64)>,
    insert_bound_failures: u64,
    dyn_touched_exact: bool,
    dyn_within_sampler_bound: bool,
    dyn_bound_failures: u64,
    dyn_updates: u64,
}

fn budgets() -> Budgets {
    let k = 2;
    let n = 2000;
    let mut insert_max = Vec::new();
    let mut insert_bound_failures = 0;
    for (i, m) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
        let stream = gen_random_inserts(n, k, 100, m, &mut sub_rng(SEED, 109, i as u64)).unwrap();
        let mut engine =
            Engine::new(Algorithm::InsertOnly { delta: 1.0 / 16.0 }, n, k, 1, &mut sub_rng(SEED, 110, 0)).unwrap();
        let p = measure(&mut engine, &stream).unwrap();
        let Engine::InsertOnly(ref matcher) = engine else { unreachable!() };
        insert_max.push((m, p.max_update_ops, matcher.max_update_ops()));
        insert_bound_failures += p.bound_failures;
    }

    let cfg = PlantedConfig::new(DYN_N, 2, DYN_W, DYN_M, DYN_DEL, StreamModel::Dynamic);
    let stream = kmatch_stream::harness::gen_planted(&cfg, &mut sub_rng(SEED, 111, 0)).unwrap().stream;
    let mut engine = Engine::new(Algorithm::Dynamic, DYN_N, 2, 1, &mut sub_rng(SEED, 112, 0)).unwrap();
    let (mut touched_exact, mut within, mut failures, mut updates) = (true, true, 0, 0);
    for r in &stream.records {
        let Record::Update(u) = r else { continue };
        engine.update(u).unwrap();
        updates += 1;
        let Engine::Dynamic(ref d) = engine else { unreachable!() };
        let c = d.last_cost();
        let d2 = d.scheme().params().d2 as u64;
        let per_sampler = d.bank().values().next().unwrap().max_update_ops();
        touched_exact &= c.touched_samplers == d2 * d2;
        within &= c.sampler_ops <= d2 * d2 * per_sampler;
        failures += (!d.bank_within_bounds()) as u64;
    }
    Budgets {
        insert_max,
        insert_bound_failures,
        dyn_touched_exact: touched_exact,
        dyn_within_sampler_bound: within,
        dyn_bound_failures: failures,
        dyn_updates: updates,
    }
}

fn update_time(b: &Budgets) -> Outcome {
    let maxima: Vec<u64> = b.insert_max.iter().map(|x| x.1).collect();
    let ratio = *maxima.iter().max().unwrap() as f64 / *maxima.iter().min().unwrap() as f64;
    let bound_ok = b.insert_max.iter().all(|x| x.1 <= x.2);
    let pass = ratio <= 1.1 && bound_ok && b.dyn_touched_exact && b.dyn_within_sampler_bound;
    let listed: Vec<String> = b.insert_max.iter().map(|(m, ops, _)| format!("m={m}: {ops}")).collect();
    outcome(
        pass,
        format!(
            "insert-only max ops {} (ratio {ratio:.3} <= 1.1); dynamic touched = d2^2 on every update: {}, \
             ops within d2^2 x sampler cost: {}",
            listed.join(", "),
            b.dyn_touched_exact,
            b.dyn_within_sampler_bound
        ),
    )
}

fn space(b: &Budgets, dyn_reports: &[(usize, TrialReport, TrialReport)], ins_reports: &[(f64, TrialReport)]) -> Outcome {
    let trial_failures: usize = dyn_reports.iter().map(|r| r.1.bound_failures + r.2.bound_failures).sum::<usize>()
        + ins_reports.iter().map(|r| r.1.bound_failures).sum::<usize>();
    let pass = b.dyn_bound_failures == 0 && b.insert_bound_failures == 0 && trial_failures == 0;
    outcome(
        pass,
        format!(
            "bank bound failures {} over {} updates, insert-only stored-edge failures {} over 111000 updates, \
             failures during trials {trial_failures}",
            b.dyn_bound_failures, b.dyn_updates, b.insert_bound_failures
        ),
    )
}

fn exact_solver() -> Outcome {
    let agree = (0..1000u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = sub_rng(SEED, 113, t);
            let n = rng.gen_range(2..12u64);
            let m = rng.gen_range(0..=18usize.min((n * (n - 1) / 2) as usize));
            let k = rng.gen_range(1..=4);
            let stream = gen_random_inserts(n, 1, rng.gen_range(1..8), m, &mut rng).unwrap();
            let g = SmallGraph::new(stream.updates().map(EdgeUpdate::edge).collect()).unwrap();
            let fast = solve_exact(&g, k);
            let slow = enumerate_oracle(&g, k);
            let valid = fast.as_ref().is_none_or(|m| is_valid_k_matching(m, k, g.edges()));
            valid && fast.map(|m| m.weight()) == slow.map(|m| m.weight())
        })
        .count();
    outcome(agree == 1000, format!("{agree}/1000 instances agree (|E| <= 18, k <= 4)"))
}

struct Tally {
    total: u32,
    failed: u32,
}

impl Tally {
    fn record(&mut self, id: u32, name: &str, o: Outcome) {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        self.total += 1;
        self.failed += (!o.pass) as u32;
        println!("[{tag}] criterion {id:>2} {name}: {}", o.detail);
    }
}

fn main() -> ExitCode {
    let mut t = Tally { total: 0, failed: 0 };
    t.record(1, "hash toolkit witness", toolkit_witness());
    t.record(2, "interval properties", interval_properties());
    t.record(3, "l0-sampler", l0_sampler());

    let start = Instant::now();
    let exact = dynamic_reports(Algorithm::Dynamic);
    t.record(4, "dynamic exact", dynamic_exact(&exact, start.elapsed()));
    let approx = dynamic_reports(Algorithm::DynamicApprox { epsilon: 0.1 });
    t.record(5, "dynamic approx", dynamic_approx(&approx));

    t.record(6, "reduced subgraph", reduced_subgraph());
    let insert_reports: Vec<(f64, TrialReport)> = [0.5, 1.0 / 16.0]
        .into_iter()
        .map(|delta| {
            let cfg = TrialConfig {
                algorithm: Algorithm::InsertOnly { delta },
                workload: Workload::Planted(PlantedConfig::new(50, 2, 5, 300, 0.0, StreamModel::InsertOnly)),
                trials: 1000,
                seed: SEED,
            };
            (delta, run_trials(&cfg).unwrap())
        })
        .collect();
    t.record(7, "insert-only", insert_only(&insert_reports));
    t.record(8, "staggering", staggering());
    let b = budgets();
    t.record(9, "update time", update_time(&b));
    let mut all = exact;
    all.extend(approx);
    t.record(10, "space", space(&b, &all, &insert_reports));
    t.record(11, "exact solver", exact_solver());

    if t.failed == 0 {
        println!("all {} criteria passed", t.total);
        ExitCode::SUCCESS
    } else {
        println!("{} of {} criteria failed", t.failed, t.total);
        ExitCode::FAILURE
    }
}
