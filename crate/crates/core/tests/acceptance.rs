//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use waring_core::oracle::elimination::{direct_power_sum_with_scale, solve_system_2d};
use waring_core::oracle::{relative_deviation, torus_residue_quadrature, QuadratureSpec, Radii};
use waring_core::transcend::{example2_reference, truncated_sigma, Example2Family, SeriesJob, Shells};
use waring_core::{
    newton_coefficients, power_sum, power_sum_transformed, residue_series_z, Error, Exact, MultiIndex, PowerSumRequest, Scalar,
    TsikhSystem,
};

use common::{example_one, example_one_closed_form, example_one_unit, idx, nonzero_rational, q, random_system};

const SEED: u64 = 0x5eed_2024;
const RANDOM_SYSTEMS: usize = 50;

type Outcome = Result<String, String>;

fn random_systems() -> Vec<TsikhSystem<Exact>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..RANDOM_SYSTEMS).map(|_| random_system(&mut rng, 0.15)).collect()
}

fn value(sys: &TsikhSystem<Exact>, gamma: &MultiIndex, t: &Exact) -> Exact {
    power_sum(sys, &PowerSumRequest::new(gamma.clone(), t.clone())).unwrap().value
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn example_one_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    while count < 24 {
        let a2 = nonzero_rational(&mut rng, 9, 7);
        let b2 = nonzero_rational(&mut rng, 9, 7);
        if a2 == b2 {
            continue;
        }
        let (a3, b1, b3) = (
            nonzero_rational(&mut rng, 9, 7),
            nonzero_rational(&mut rng, 9, 7),
            nonzero_rational(&mut rng, 9, 7),
        );
        let sys = example_one(a2.clone(), a3.clone(), b1.clone(), b2.clone(), b3);
        let start = Instant::now();
        let v = value(&sys, &MultiIndex::zeros(2), &q(1, 1));
        let dt = start.elapsed();
        slowest = slowest.max(dt);
        let expect = example_one_closed_form(&a2, &a3, &b1, &b2);
        if v != expect {
            return Err(format!("a2={a2} a3={a3} b1={b1} b2={b2}: engine {v}, closed form {expect}"));
        }
        if dt >= Duration::from_secs(1) {
            return Err(format!("instance took {}", secs(dt)));
        }
        count += 1;
    }
    Ok(format!("{count} tuples equal exactly, slowest {}", secs(slowest)))
}

fn root_counts() -> Outcome {
    let ts = example_one_unit().transform().unwrap();
    let rs = solve_system_2d(&ts).map_err(|e| format!("example 1: {e}"))?;
    if rs.total_multiplicity() != 5 || ts.permanent() != 5 {
        return Err(format!("example 1: {} roots, permanent {}", rs.total_multiplicity(), ts.permanent()));
    }
    let mut checked = 0;
    for (s, sys) in random_systems().iter().enumerate() {
        for t in [q(0, 1), q(1, 4), q(1, 1)] {
            let ts = sys.with_t(t.clone()).transform().unwrap();
            let rs = solve_system_2d(&ts).map_err(|e| format!("system {s} at t={t}: {e}"))?;
            if rs.total_multiplicity() != ts.permanent() {
                return Err(format!(
                    "system {s} at t={t}: {} roots, permanent {}",
                    rs.total_multiplicity(),
                    ts.permanent()
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("example 1 has 5 roots; {checked} (system, t) pairs match the permanent"))
}

fn oracle_equivalence() -> Outcome {
    let gammas = [idx(&[0, 0]), idx(&[1, 0]), idx(&[1, 1])];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for (s, sys) in random_systems().iter().enumerate() {
        let start = Instant::now();
        for t in [q(1, 4), q(1, 1)] {
            let ts = sys.with_t(t.clone()).transform().unwrap();
            let rs = solve_system_2d(&ts).map_err(|e| format!("system {s} at t={t}: {e}"))?;
            for g in &gammas {
                let e = power_sum_transformed(&ts, &PowerSumRequest::new(g.clone(), t.clone()))
                    .map_err(|e| format!("system {s}: {e}"))?
                    .value
                    .to_c64();
                let (d, scale) = direct_power_sum_with_scale(&rs, g, 1e-6);
                let dev = relative_deviation(e, d, scale);
                worst = worst.max(dev);
                if dev > 1e-8 {
                    return Err(format!("system {s}, gamma {g}, t={t}: engine {e}, roots {d}, deviation {dev:.3e}"));
                }
            }
        }
        let dt = start.elapsed();
        slowest = slowest.max(dt);
        if dt >= Duration::from_secs(5) {
            return Err(format!("system {s} took {}", secs(dt)));
        }
    }
    Ok(format!("{RANDOM_SYSTEMS} systems, worst deviation {worst:.2e}, slowest {}", secs(slowest)))
}

/// Pairs whose tori admit no dominant radius are outside the hypothesis of
/// the residue identity and are counted, not compared.
fn quadrature_check() -> Outcome {
    let mut systems = vec![example_one_unit()];
    systems.extend(random_systems());
    let mut worst = 0.0f64;
    let mut worst_drift = 0.0f64;
    let mut compared = 0;
    let mut inapplicable = Vec::new();
    for (s, sys) in systems.iter().enumerate() {
        let ts = sys.transform().unwrap();
        for (tn, td) in [(1, 100), (1, 10)] {
            let t = q(tn, td);
            let gamma = MultiIndex::zeros(2);
            let e = value(sys, &gamma, &t).to_c64();
            let spec = |nodes| QuadratureSpec {
                radii: Radii::Auto,
                nodes_per_dim: nodes,
                t: t.to_c64(),
            };
            let v = match torus_residue_quadrature(&ts, &gamma, &spec(128)) {
                Ok(v) => v,
                Err(Error::DominanceViolation { .. }) if s > 0 => {
                    inapplicable.push(format!("{s}@{t}"));
                    continue;
                }
                Err(e) => return Err(format!("system {s} at t={t}: {e}")),
            };
            let v2 = torus_residue_quadrature(&ts, &gamma, &spec(256)).map_err(|e| format!("system {s} at t={t}: {e}"))?;
            let dev = relative_deviation(e, v.value, 0.0);
            let drift = relative_deviation(v2.value, v.value, 0.0);
            worst = worst.max(dev);
            worst_drift = worst_drift.max(drift);
            if dev > 1e-6 {
                return Err(format!("system {s} at t={t}: engine {e}, quadrature {}, deviation {dev:.3e}", v.value));
            }
            if drift > 1e-8 {
                return Err(format!("system {s} at t={t}: doubling N moved the value by {drift:.3e} relative"));
            }
            compared += 1;
        }
    }
    let total = 2 * systems.len();
    if 2 * compared < total {
        return Err(format!("only {compared} of {total} (system, t) pairs satisfy dominance"));
    }
    Ok(format!(
        "{compared} of {total} (system, t) pairs compared, worst deviation {worst:.2e}, worst relative N-doubling change {worst_drift:.2e}; no dominant torus for {}",
        inapplicable.join(" ")
    ))
}

/// Lagrange interpolation through `(xs, ys)` evaluated at `x`.
fn interpolate(xs: &[Exact], ys: &[Exact], x: &Exact) -> Exact {
    let mut acc = q(0, 1);
    for k in 0..xs.len() {
        let mut term = ys[k].clone();
        for j in 0..xs.len() {
            if j != k {
                term = term * (x.clone() - xs[j].clone()) / (xs[k].clone() - xs[j].clone());
            }
        }
        acc = acc + term;
    }
    acc
}

fn polynomiality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let gamma = idx(&[1, 0]);
    let n = 2;
    let degree = gamma.max_component() as usize + 2 * n;
    let samples: Vec<Exact> = (0..degree as i64 + 2).map(|k| q(k - 2, 3)).collect();
    let held_out = [q(-5, 2), q(2, 7), q(5, 3), q(3, 1), q(-11, 13)];
    for s in 0..10 {
        let sys = random_system(&mut rng, 0.15);
        let ys: Vec<Exact> = samples.iter().map(|t| value(&sys, &gamma, t)).collect();
        for t in &held_out {
            let p = interpolate(&samples, &ys, t);
            let v = value(&sys, &gamma, t);
            if p != v {
                return Err(format!("system {s} at t={t}: interpolant {p}, engine {v}"));
            }
        }
    }
    Ok(format!(
        "10 systems, degree bound {degree}, {} samples, 5 held-out values with zero residual",
        samples.len()
    ))
}

fn z_series() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let t = q(1, 1000);
    let mut worst = 0.0f64;
    for s in 0..10 {
        let sys = random_system(&mut rng, 0.0);
        for gamma in [idx(&[0, 0]), idx(&[1, 0])] {
            let series = residue_series_z(&sys, &gamma, &t, 4).map_err(|e| format!("system {s}: {e}"))?;
            if !series.skipped.is_empty() {
                return Err(format!("system {s}: lattice roots skipped"));
            }
            let e = value(&sys, &gamma, &t).to_c64();
            let dev = relative_deviation(e, series.value.to_c64(), 0.0);
            worst = worst.max(dev);
            if dev > 1e-9 {
                return Err(format!("system {s}, gamma {gamma}: engine {e}, series {}, deviation {dev:.3e}", series.value.to_c64()));
            }
        }
    }
    Ok(format!("10 systems, worst deviation {worst:.2e}"))
}

fn newton_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for deg in 1..=8usize {
        for _ in 0..5 {
            let roots: Vec<Exact> = (0..deg).map(|_| nonzero_rational(&mut rng, 7, 5)).collect();
            // prod (1 - w / r) in ascending coefficients
            let mut b = vec![q(1, 1)];
            for r in &roots {
                let c = -(q(1, 1) / r.clone());
                let mut next = b.clone();
                next.push(q(0, 1));
                for k in 0..b.len() {
                    next[k + 1] = next[k + 1].clone() + c.clone() * b[k].clone();
                }
                b = next;
            }
            let s: Vec<Exact> = (1..=deg as u32)
                .map(|k| roots.iter().fold(q(0, 1), |acc, r| acc + (q(1, 1) / r.clone()).pow_nat(k)))
                .collect();
            let got = newton_coefficients(&s, deg).map_err(|e| e.to_string())?;
            if got != b {
                return Err(format!("degree {deg}: recurrence gave {got:?}, expansion {b:?}"));
            }
        }
    }
    let sys = example_one_unit();
    let s: Vec<Exact> = (0..3u32).map(|i| value(&sys, &idx(&[i, i]), &q(1, 1))).collect();
    let b = newton_coefficients(&s, 3).map_err(|e| e.to_string())?;
    if b[1] != -q(17, 4) {
        return Err(format!("example 1: b1 = {}", b[1]));
    }
    Ok(format!("40 products up to degree 8; example 1 b1 = {}, b2 = {}, b3 = {}", b[1], b[2], b[3]))
}

const FAMILY: Example2Family = Example2Family {
    a2: 1.0,
    a3: 1.0,
    b1: 1.0,
    b2: -1.0,
    b3: 1.0,
};

struct Example2Run {
    result: waring_core::transcend::SeriesResult,
    elapsed: Duration,
}

fn example2_run() -> Example2Run {
    let job = SeriesJob {
        gamma: MultiIndex::zeros(2),
        s_max: vec![1000, 1000],
        shells: Shells::Rectangle,
    };
    let start = Instant::now();
    let result = truncated_sigma(&FAMILY, &job).unwrap();
    Example2Run {
        result,
        elapsed: start.elapsed(),
    }
}

fn example2_lattice(run: &Example2Run) -> Outcome {
    let expect = FAMILY.a2 * FAMILY.b1 / 9.0;
    let got = run.result.lattice_value;
    let dev = relative_deviation(got, Complex64::new(expect, 0.0), 0.0);
    if dev > 2e-3 {
        return Err(format!("lattice part {got} vs {expect}, deviation {dev:.3e}"));
    }
    if run.elapsed >= Duration::from_secs(60) {
        return Err(format!("{} subsystems took {}", run.result.subsystems, secs(run.elapsed)));
    }
    Ok(format!(
        "lattice part {:.10} vs a2 b1/9 = {expect:.10}, deviation {dev:.2e}, {} subsystems in {}",
        got.re,
        run.result.subsystems,
        secs(run.elapsed)
    ))
}

fn example2_k4() -> Outcome {
    let r = example2_reference(FAMILY.a2, FAMILY.a3, FAMILY.b1, FAMILY.b2, 100_000).map_err(|e| e.to_string())?;
    let dev = ((r.k4_direct - r.k4_closed) / r.k4_closed).abs();
    if dev > 1e-10 {
        return Err(format!("direct {} vs closed form {}, deviation {dev:.3e}", r.k4_direct, r.k4_closed));
    }
    Ok(format!("direct {:.15} vs a3 pi^2/(180 b2) = {:.15}, deviation {dev:.2e}", r.k4_direct, r.k4_closed))
}

fn example2_total(run: &Example2Run) -> Outcome {
    let r = example2_reference(FAMILY.a2, FAMILY.a3, FAMILY.b1, FAMILY.b2, 100_000).map_err(|e| e.to_string())?;
    let got = run.result.value;
    let gap = (got - Complex64::new(r.total, 0.0)).norm();
    let allowed = run.result.tail.bound + r.tail_bound;
    let p = run
        .result
        .tail
        .decay_exponent
        .map_or("none".to_string(), |p| format!("{p:.3}"));
    if !allowed.is_finite() || gap > allowed {
        return Err(format!(
            "truncated sigma {:.6} vs reference {:.6}: gap {gap:.3e} exceeds tail bound {allowed:.3e} (last shell {:.3e}, decay exponent {p})",
            got.re, r.total, run.result.tail.last_shell
        ));
    }
    Ok(format!("truncated sigma {:.10} vs reference {:.10}, gap {gap:.2e} within {allowed:.2e}", got.re, r.total))
}

fn run(tag: &str, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(o) => o,
        Err(p) => Err(format!(
            "panicked: {}",
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default()
        )),
    };
    let dt = secs(start.elapsed());
    match outcome {
        Ok(detail) => {
            println!("PASS [{tag}] {name}: {detail} ({dt})");
            true
        }
        Err(detail) => {
            println!("FAIL [{tag}] {name}: {detail} ({dt})");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= run("1", "example 1 closed form", example_one_identity);
    ok &= run("2", "root count equals permanent", root_counts);
    ok &= run("3", "engine vs direct root sum", oracle_equivalence);
    ok &= run("4", "engine vs torus quadrature", quadrature_check);
    ok &= run("5", "polynomial in t", polynomiality);
    ok &= run("6", "z-side residue series", z_series);
    ok &= run("7", "newton recurrence", newton_round_trip);
    ok &= run("8b", "example 2 k^-4 sum", example2_k4);
    let series = catch_unwind(example2_run);
    match &series {
        Ok(r) => {
            ok &= run("8a", "example 2 lattice part", || example2_lattice(r));
            ok &= run("8c", "example 2 full series vs reference", || example2_total(r));
        }
        Err(_) => {
            println!("FAIL [8a] example 2 lattice part: series evaluation panicked");
            println!("FAIL [8c] example 2 full series vs reference: series evaluation panicked");
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
