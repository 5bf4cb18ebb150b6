//! Acceptance run. Each criterion prints one PASS or FAIL line with its
//! runtime; the process exits nonzero if any criterion fails or runs over
//! its time budget.

mod common;

use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{c, disc_gauge, line_germ, pick_run, Case, CASES, I};
use hypflat_core::connections::manufactured::{conjugated_rotation_loop, rotation_loop, TwoFactorPath};
use hypflat_core::connections::{gauge_transform, holonomy, lifted_shift, Domain, GaugePath, LiftedHolonomy, PathConnection};
use hypflat_core::cr::{
    cylinder_bound, cylinder_feasibility_experiment, energy_geom, energy_top, extremal_ratio, schwarz_integral,
    schwarz_integral_extrapolated, BoundaryCondition, CylinderOptions, Disc, DomainSpec, GridConnection, GridMap, Mesh, ModelTag,
    Shape, DEFAULT_TOL,
};
use hypflat_core::hyperbolic::disc::poisson_residual_fd;
use hypflat_core::hyperbolic::{poisson_residual, LieAlgebraElement, LieElement, LiftedPoint, MoebiusMap};
use hypflat_core::moduli::config::rotation_one_element;
use hypflat_core::moduli::{
    check_c_tau, check_ptau_circle, construct_c_tau_point, deck_shift, sheet_index, LoopDatum, PuncturedConfig,
};
use hypflat_core::Execution;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lie(rng: &mut impl Rng, r: f64) -> LieElement {
    LieElement::new(rng.gen_range(-r..r), c(rng.gen_range(-r..r), rng.gen_range(-r..r)))
}

fn poisson() -> Outcome {
    let mut r = rng(101);
    let (mut worst, mut worst_fd) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (g1, g2) = (lie(&mut r, 1.0), lie(&mut r, 1.0));
        let w = Complex64::from_polar(0.9 * r.gen::<f64>().sqrt(), r.gen_range(0.0..TAU));
        worst = worst.max(poisson_residual(&g1, &g2, w).map_err(|e| e.to_string())?);
        worst_fd = worst_fd.max(poisson_residual_fd(&g1, &g2, w, 1e-5).map_err(|e| e.to_string())?);
    }
    ensure!(worst < 1e-6, "analytic residual {worst:e}");
    ensure!(worst_fd < 1e-4, "finite-difference residual {worst_fd:e}");
    Ok(format!("max residual {worst:.1e}, finite differences {worst_fd:.1e}"))
}

fn sample_path() -> TwoFactorPath {
    TwoFactorPath {
        g1: LieElement::new(0.7, c(0.2, -0.5)),
        g2: LieElement::new(-0.3, c(1.0, 0.4)),
        f: |t| t.sin() + t * t,
        df: |t| t.cos() + 2.0 * t,
        g: |t| (2.0 * t).cos() - 1.0,
        dg: |t| -2.0 * (2.0 * t).sin(),
    }
}

fn transport_and_gauge() -> Outcome {
    let p = sample_path();
    let a = p.connection(Domain::Interval, 2048).unwrap();
    let (t0, t1, t2) = (a.node(100), a.node(900), a.node(2000));
    let split = a.transport(t1, t2).unwrap().compose(&a.transport(t0, t1).unwrap());
    let concat = a.transport(t0, t2).unwrap().distance(&split);
    ensure!(concat < 1e-10, "concatenation at nodes {concat:e}");
    let split = a.transport(0.5001, 0.8765).unwrap().compose(&a.transport(0.1234, 0.5001).unwrap());
    let concat_off = a.transport(0.1234, 0.8765).unwrap().distance(&split);
    ensure!(concat_off < 1e-8, "concatenation off nodes {concat_off:e}");

    let exact = p.phi(1.0).compose(&p.phi(0.0).inverse());
    let err = |n| p.connection(Domain::Interval, n).unwrap().full_transport().distance(&exact);
    let order = err(1024) / err(2048);
    ensure!((3.0..=5.0).contains(&order), "transport order ratio {order}");

    let loop_a = PathConnection::<MoebiusMap>::from_fn(Domain::Circle, 2048, |t| {
        LieElement::new(0.2 + 0.3 * (TAU * t).sin(), c(1.0, 0.0) + Complex64::from_polar(0.2, TAU * t))
    })
    .unwrap();
    let k = LieElement::new(0.2, c(0.5, -0.1)).exp(1.0);
    let phi =
        GaugePath::from_fn(Domain::Circle, 2048, |t| k.compose(&LieElement::real(0.1, 0.4).exp(0.25 * (TAU * t).sin()))).unwrap();
    let b = gauge_transform(&phi, &loop_a).unwrap();
    let covariance = b.full_transport().distance(&k.compose(&loop_a.full_transport()).compose(&k.inverse()));
    ensure!(covariance < 1e-6, "holonomy covariance {covariance:e}");

    let gauge = |t: f64| LieElement::new(0.5 * t, c(t.cos(), 0.3)).exp(1.0 + t);
    let defect = |n: usize| {
        let a = p.connection(Domain::Interval, n).unwrap();
        let phi = GaugePath::from_fn(Domain::Interval, n, gauge).unwrap();
        let b = gauge_transform(&phi, &a).unwrap();
        b.full_transport().distance(&phi.last().compose(&a.full_transport()).compose(&phi.first().inverse()))
    };
    let gauge_order = defect(1024) / defect(2048);
    ensure!((3.0..=5.0).contains(&gauge_order), "gauge covariance order ratio {gauge_order}");

    let a = PathConnection::<MoebiusMap>::from_fn(Domain::Interval, 2048, |t| {
        LieElement::new(0.3 + 0.2 * (PI * t).sin(), c(0.8, 0.2 * (PI * t).cos()))
    })
    .unwrap();
    let triv = gauge_transform(&a.gauge_path().inverse(), &a).unwrap();
    let residual = triv.samples().iter().map(|g| g.norm()).fold(0.0, f64::max);
    ensure!(residual < 1e-6, "trivialization residual {residual:e}");
    Ok(format!(
        "concatenation {concat:.1e}/{concat_off:.1e}, covariance {covariance:.1e}, trivialization {residual:.1e}, order ratios {order:.2}/{gauge_order:.2}"
    ))
}

/// Checks the shift of `h` at `x` against the arc containing it.
fn trichotomy(h: &LiftedHolonomy, x: f64) -> Result<(), String> {
    let (small, big) = h.element().fixed_points().map_err(|e| e.to_string())?;
    let p = LiftedPoint(x).project();
    if p.circle_distance(&small) < 1e-6 || p.circle_distance(&big) < 1e-6 {
        return Ok(());
    }
    let rel = lifted_shift(h, LiftedPoint(x)) - TAU * h.rotation_number() as f64;
    let ok = if p.in_open_arc(&small, &big) { rel > 0.0 && rel < TAU } else { rel > -TAU && rel < 0.0 };
    ensure!(ok, "shift {rel} - 2π·rot at {x} for rotation number {}", h.rotation_number());
    Ok(())
}

fn rotation_numbers() -> Outcome {
    for tau in [2.1, 3.0, 10.0] {
        let a = rotation_loop(tau, 2048).unwrap();
        ensure!(check_ptau_circle(&LoopDatum { connection: a, tau }, 1e-4).unwrap(), "rotation loop at τ = {tau} not in P_τ");
    }
    let mut r = rng(103);
    let mut worst_fixed = 0.0f64;
    for sample in 0..1000 {
        let tau = r.gen_range(2.1..10.0);
        let k = LieElement::new(r.gen_range(-1.0..1.0), c(r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5))).exp(1.0);
        let h = match sample % 4 {
            // a constant hyperbolic loop has rotation number zero
            0 => holonomy(
                &PathConnection::constant(Domain::Circle, 64, LieElement::real(0.0, r.gen_range(0.3..2.0)))
                    .unwrap()
                    .conjugated(&k),
            ),
            1 => {
                let h = holonomy(&conjugated_rotation_loop(tau, 256, &k).unwrap()).unwrap();
                h.compose(&h)
            }
            _ => holonomy(&conjugated_rotation_loop(tau, 256, &k).unwrap()),
        }
        .map_err(|e| e.to_string())?;
        trichotomy(&h, r.gen_range(-3.0 * TAU..3.0 * TAU))?;
        let (small, big) = h.element().fixed_points().unwrap();
        for fixed in [small, big] {
            let x = fixed.angle() + TAU * r.gen_range(-2..=2) as f64;
            worst_fixed = worst_fixed.max((lifted_shift(&h, LiftedPoint(x)) - TAU * h.rotation_number() as f64).abs());
        }
    }
    ensure!(worst_fixed < 1e-6, "fixed-point shift off by {worst_fixed:e}");
    Ok(format!("1000 trichotomy samples, fixed-point shift error {worst_fixed:.1e}"))
}

fn random_config(rng: &mut impl Rng) -> PuncturedConfig {
    let tau = [2.1, 3.0, 10.0][rng.gen_range(0..3)];
    let l_big = rng.gen_range(-PI..PI);
    let l_small = l_big + rng.gen_range(0.3..TAU - 0.3);
    let holonomy = rotation_one_element(tau, l_small, l_big).unwrap();
    let d = rng.gen_range(0..5);
    let mut labels = vec![LiftedPoint(l_big + rng.gen_range(-1.0..1.0) * TAU)];
    for _ in 0..d {
        let last = labels.last().unwrap().value();
        labels.push(LiftedPoint(last - rng.gen_range(-0.3..0.6) * PI));
    }
    PuncturedConfig { holonomy, labels, tau }
}

fn moduli() -> Outcome {
    let results = Execution::Parallel.map_range(10_000, |i| -> Result<(bool, bool), String> {
        let config = random_config(&mut rng(1_000_000 + i as u64));
        let rep = config.evaluate(1e-6).map_err(|e| e.to_string())?;
        ensure!(rep.windowed == rep.eigen_interval, "formulations disagree on {config:?}");
        if rep.windowed {
            let k = sheet_index(&config, None).map_err(|e| e.to_string())?;
            let shifted = sheet_index(&deck_shift(&config, 1), None).map_err(|e| e.to_string())?;
            ensure!(shifted == k + 1, "sheet index {k} became {shifted}");
        }
        Ok((rep.windowed, true))
    });
    let mut members = 0;
    for r in results {
        members += r?.0 as usize;
    }
    ensure!(members > 0 && members < 10_000, "{members} members, the sample does not probe both sides");

    let jobs: Vec<(usize, f64, u64)> =
        (0..=6).flat_map(|d| [2.1, 3.0, 10.0].into_iter().flat_map(move |t| (0..100).map(move |s| (d, t, s)))).collect();
    let built = Execution::Parallel.map(jobs, |(d, tau, seed)| -> Result<(), String> {
        let config = construct_c_tau_point(d, tau, seed).map_err(|e| e.to_string())?;
        ensure!(check_c_tau(&config).map_err(|e| e.to_string())?, "construction d = {d}, τ = {tau}, seed {seed} is not a member");
        let k = sheet_index(&config, None).map_err(|e| e.to_string())?;
        ensure!(sheet_index(&deck_shift(&config, 1), None).map_err(|e| e.to_string())? == k + 1, "sheet index shift");
        Ok(())
    });
    built.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("10000 random configs agree ({members} members), 2100 constructions are members"))
}

fn schwarz_pick() -> Outcome {
    let mut worst: f64 = 0.0;
    let runs: Vec<(Shape, usize, u64)> = [Shape::Disc, Shape::HalfDisc]
        .into_iter()
        .flat_map(|s| [32, 64].into_iter().flat_map(move |n| (0..3).map(move |seed| (s, n, seed))))
        .collect();
    for run in Execution::Parallel.map(runs, |(s, n, seed)| pick_run(s, n, seed)) {
        ensure!(run.ratio <= 1.0 + 5.0 * run.h, "{:?} h = {}: ratio {}", run.shape, run.h, run.ratio);
        worst = worst.max(run.ratio);
    }
    for n in [32, 64] {
        let mesh = Mesh::new(DomainSpec::new(Shape::Disc, n, n)).unwrap();
        for p in mesh.nodes() {
            let e = extremal_ratio(p.z);
            ensure!((e - 1.0).abs() < 1e-10, "extremal ratio {e} at {}", p.z);
        }
    }
    Ok(format!("12 solutions, largest ratio {worst:.4}, extremal exact"))
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

fn schwarz() -> Outcome {
    let mut closed: f64 = 0.0;
    for z in [c(0.3, 0.7), c(-1.0, 0.4), c(2.0, 1.5)] {
        let u = schwarz_integral_extrapolated(|x| 1.0 / (1.0 + x * x), z, 100.0, DEFAULT_TOL).map_err(|e| e.to_string())?;
        closed = closed.max((u - I / (z + I)).norm());
    }
    ensure!(closed < 1e-8, "closed form error {closed:e}");

    let xs: Vec<f64> = (-45..=45).map(|k| k as f64 / 50.0).collect();
    let gap = |eps: f64| {
        xs.iter()
            .map(|&x| (schwarz_integral(bump, (-1.0, 1.0), c(x, eps), DEFAULT_TOL).unwrap().re - bump(x)).abs())
            .fold(0.0, f64::max)
    };
    let gaps: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&e| gap(e)).collect();
    ensure!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "boundary gaps {gaps:?}");

    let g1 = |x: f64| bump(x) * (3.0 * x).cos();
    let g2 = |x: f64| x * x * bump(x);
    let mut linear: f64 = 0.0;
    for z in [c(0.1, 0.3), c(-2.0, 0.05), c(0.7, 2.0)] {
        let s = |g: &dyn Fn(f64) -> f64| schwarz_integral(g, (-1.0, 1.0), z, 1e-15).unwrap();
        linear = linear.max((s(&|x| g1(x) + g2(x)) - s(&g1) - s(&g2)).norm());
    }
    ensure!(linear < 1e-12, "linearity defect {linear:e}");
    Ok(format!(
        "closed form {closed:.1e}, boundary gaps {:.1e} > {:.1e} > {:.1e}, linearity {linear:.1e}",
        gaps[0], gaps[1], gaps[2]
    ))
}

fn energy() -> Outcome {
    let n = 24;
    let mesh = Case::DiscGauge.mesh(n);
    let dagger = |z: Complex64| I * (1.0 + 0.2 * z) + 0.1 * z * z;
    let bc = BoundaryCondition::germs(&mesh, |z| line_germ(dagger(z)).transformed(&disc_gauge(z)));
    let conn = GridConnection::from_gauge(&mesh, disc_gauge);
    let (sol, _) = Case::DiscGauge.solve(n);
    let base = energy_top::<Disc>(&mesh, &sol.map, &conn, &bc).map_err(|e| e.to_string())?;
    let interior: Vec<usize> = (0..mesh.len()).filter(|k| bc.get(*k).is_none()).collect();
    let mut r = rng(107);
    let mut drift: f64 = 0.0;
    for _ in 0..1000 {
        let centre = mesh.position(interior[r.gen_range(0..interior.len())]);
        let amp = Complex64::from_polar(r.gen_range(0.01..0.1), r.gen_range(0.0..TAU));
        let radius = r.gen_range(0.1..0.3);
        let mut u = sol.map.clone();
        for &k in &interior {
            let s = (mesh.position(k) - centre).norm() / radius;
            if s < 1.0 {
                u.values[k] += amp * (1.0 - s * s).powi(2);
            }
        }
        let rep = energy_top::<Disc>(&mesh, &u, &conn, &bc).map_err(|e| e.to_string())?;
        drift = drift.max((rep.top - base.top).abs());
        ensure!(rep.geom >= 0.0, "negative geometric energy {}", rep.geom);
    }
    ensure!(drift < 1e-6, "topological energy moved by {drift:e}");

    let square = Mesh::new(DomainSpec::new(Shape::Rectangle { length: 1.0 }, 12, 12)).unwrap();
    for _ in 0..200 {
        let values = (0..square.len()).map(|_| Complex64::from_polar(0.9 * r.gen::<f64>(), r.gen_range(0.0..TAU))).collect();
        let g = lie(&mut r, 1.0);
        let conn = GridConnection::from_fn(&square, |z| (g * z.re, g * z.im));
        let e = energy_geom::<Disc>(&square, &GridMap::new(ModelTag::Disc, values), &conn).map_err(|e| e.to_string())?;
        ensure!(e >= 0.0, "negative geometric energy {e}");
    }

    // u = Φ w₀ with A = (dΦ)Φ⁻¹ solves Du = X_A exactly
    let w0 = c(0.1, -0.2);
    let flat: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let mesh = Mesh::new(DomainSpec::new(Shape::Rectangle { length: 1.0 }, n, n)).unwrap();
            let u = GridMap::from_fn::<Disc>(&mesh, |z| disc_gauge(z).apply(w0));
            energy_geom::<Disc>(&mesh, &u, &GridConnection::from_gauge(&mesh, disc_gauge)).unwrap()
        })
        .collect();
    ensure!(flat[2] < 1e-7 && flat[0] > flat[1] && flat[1] > flat[2], "flat section energies {flat:?}");
    Ok(format!("1000 perturbations move E^top by {drift:.1e}, flat sections {:.1e}", flat[2]))
}

fn cylinder() -> Outcome {
    let l = cylinder_bound(2.0 * 1f64.cosh()).map_err(|e| e.to_string())?;
    ensure!((l - PI / 2.0).abs() < 1e-12, "L(2cosh 1) = {l}");
    let bounds: Vec<f64> = (0..500).map(|k| cylinder_bound(2.01 + (50.0 - 2.01) * k as f64 / 499.0).unwrap()).collect();
    ensure!(bounds.windows(2).all(|w| w[1] < w[0]), "bound is not strictly decreasing");
    let seeds: Vec<u64> = (0..20).collect();
    let mut counts = Vec::new();
    for tau in [2.0 * 1f64.cosh(), 3.0] {
        let length = 1.2 * cylinder_bound(tau).unwrap();
        let rep = cylinder_feasibility_experiment(tau, length, &seeds, &CylinderOptions::default(), Execution::Parallel)
            .map_err(|e| e.to_string())?;
        ensure!(rep.interior_convergences() == 0, "interior convergence at τ = {tau}: {rep:?}");
        counts.push(rep.runs.len());
    }
    Ok(format!(
        "L(2cosh 1) - π/2 = {:.1e}, {} + {} seeds at 1.2 L without interior convergence",
        l - PI / 2.0,
        counts[0],
        counts[1]
    ))
}

fn convergence() -> Outcome {
    let results = Execution::Parallel.map(CASES.to_vec(), |case| {
        [8, 16, 32]
            .iter()
            .map(|&n| {
                let (rep, err) = case.solve(n);
                (rep.converged(), err)
            })
            .collect::<Vec<_>>()
    });
    let mut worst = f64::INFINITY;
    for (case, runs) in CASES.iter().zip(results) {
        ensure!(runs.iter().all(|r| r.0), "{case:?} did not converge");
        for w in runs.windows(2) {
            let ratio = w[0].1 / w[1].1;
            ensure!(ratio >= 3.0, "{case:?}: ratio {ratio}");
            worst = worst.min(ratio);
        }
    }
    Ok(format!("5 cases, smallest ratio {worst:.2}"))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("poisson homomorphism", 5, poisson),
        ("transport and gauge", 30, transport_and_gauge),
        ("rotation numbers", 30, rotation_numbers),
        ("moduli", 60, moduli),
        ("schwarz-pick", 60, schwarz_pick),
        ("schwarz integral", 10, schwarz),
        ("energy", 60, energy),
        ("cylinder bound", 300, cylinder),
        ("manufactured convergence", 120, convergence),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*budget) => Err(format!("over the {budget} s budget")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} [{:.2} s]", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{:.2} s]", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
