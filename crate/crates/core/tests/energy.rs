mod common;

use common::{c, disc_gauge, line_germ, Case, I};
use hypflat_core::cr::{
    beta_form, energy_geom, energy_top, BoundaryCondition, Disc, DomainSpec, GridConnection, GridMap, HalfPlane, Mesh, ModelTag,
    NodeConstraint, Shape,
};
use hypflat_core::hyperbolic::{cayley_inverse, BoundaryPoint, GeodesicGerm, LieElement};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rectangle(length: f64, n: usize) -> Mesh {
    Mesh::new(DomainSpec::new(Shape::Rectangle { length }, (length * n as f64).round() as usize, n)).unwrap()
}

/// Angular speed of the boundary point `e` under the flow of `g`.
fn boundary_rate(g: &LieElement, e: BoundaryPoint) -> f64 {
    let w = e.to_complex();
    (g.vector_field(w) * w.conj()).im
}

#[test]
fn geometric_energy_is_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mesh = rectangle(1.0, 12);
    for _ in 0..50 {
        let values = (0..mesh.len()).map(|_| Complex64::from_polar(0.9 * rng.gen::<f64>(), rng.gen_range(0.0..6.3))).collect();
        let u = GridMap::new(ModelTag::Disc, values);
        let g = LieElement::new(rng.gen_range(-1.0..1.0), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let conn = GridConnection::from_fn(&mesh, |z| (g * z.re, g * z.im));
        assert!(energy_geom::<Disc>(&mesh, &u, &conn).unwrap() >= -1e-10);
    }
}

#[test]
fn constant_map_has_no_energy() {
    let mesh = rectangle(1.0, 8);
    let u = GridMap::constant::<HalfPlane>(&mesh, I);
    assert_eq!(energy_geom::<HalfPlane>(&mesh, &u, &GridConnection::zero(&mesh)).unwrap(), 0.0);
}

/// `u = i + εz` on `[0,l]×[0,1]` has density `ε²/(1+εy)²`, which integrates
/// to `ε² l / (1+ε)`.
#[test]
fn linear_map_matches_closed_form() {
    let (eps, l) = (0.3, 0.5);
    let exact = eps * eps * l / (1.0 + eps);
    let errs: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let mesh = rectangle(l, n);
            let u = GridMap::from_fn::<HalfPlane>(&mesh, |z| I + eps * z);
            (energy_geom::<HalfPlane>(&mesh, &u, &GridConnection::zero(&mesh)).unwrap() - exact).abs()
        })
        .collect();
    assert!(errs[2] < 1e-4 * exact, "{errs:?}");
    assert!(errs[0] / errs[1] > 3.5 && errs[1] / errs[2] > 3.5, "{errs:?}");
}

/// `u = Φ w₀` with `A = (dΦ)Φ⁻¹` solves `Du = X_A`, so only the
/// discretization error of the scheme remains.
#[test]
fn flat_sections_have_no_geometric_energy() {
    let w0 = c(0.1, -0.2);
    let energies: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let mesh = rectangle(1.0, n);
            let u = GridMap::from_fn::<Disc>(&mesh, |z| disc_gauge(z).apply(w0));
            energy_geom::<Disc>(&mesh, &u, &GridConnection::from_gauge(&mesh, disc_gauge)).unwrap()
        })
        .collect();
    assert!(energies[2] < 1e-7, "{energies:?}");
    assert!(energies[0] / energies[1] > 10.0 && energies[1] / energies[2] > 10.0, "{energies:?}");
}

fn germ_problem(n: usize) -> (Mesh, GridConnection<LieElement>, BoundaryCondition) {
    let mesh = Case::DiscGauge.mesh(n);
    let dagger = |z: Complex64| I * (1.0 + 0.2 * z) + 0.1 * z * z;
    let bc = BoundaryCondition::germs(&mesh, |z| line_germ(dagger(z)).transformed(&disc_gauge(z)));
    let conn = GridConnection::from_gauge(&mesh, disc_gauge);
    (mesh, conn, bc)
}

/// With germ conditions on the whole boundary the topological energy of
/// any admissible map vanishes, here for a map that solves nothing.
#[test]
fn topological_energy_vanishes_on_closed_germ_boundary() {
    let tops: Vec<(f64, f64)> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let (mesh, conn, bc) = germ_problem(n);
            // adding an imaginary part keeps every boundary value on its germ
            let u = GridMap::from_fn::<Disc>(&mesh, |z| {
                let w = I * (1.0 + 0.2 * z) + 0.1 * z * z + I * (0.3 * z.re * (1.0 - z.re) * (1.0 + z.im));
                disc_gauge(z).apply(cayley_inverse(w).unwrap())
            });
            let rep = energy_top::<Disc>(&mesh, &u, &conn, &bc).unwrap();
            (rep.top, rep.geom)
        })
        .collect();
    assert!(tops.iter().all(|&(_, g)| g > 1e-3), "{tops:?}");
    assert!(tops[2].0.abs() < 1e-4, "{tops:?}");
    assert!(tops[0].0.abs() / tops[1].0.abs() > 3.0 && tops[1].0.abs() / tops[2].0.abs() > 3.0, "{tops:?}");
}

#[test]
fn energy_identity_closes_on_solutions() {
    let closures: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let (mesh, conn, bc) = germ_problem(n);
            let (rep, _) = Case::DiscGauge.solve(n);
            energy_top::<Disc>(&mesh, &rep.map, &conn, &bc).unwrap().closure().abs()
        })
        .collect();
    assert!(closures[2] < 1e-5, "{closures:?}");
    assert!(closures[0] / closures[1] > 3.0 && closures[1] / closures[2] > 3.0, "{closures:?}");
}

/// Interior perturbations leave the topological energy unchanged and raise
/// the geometric one.
#[test]
fn topological_energy_is_invariant_under_interior_perturbations() {
    let (mesh, conn, bc) = germ_problem(24);
    let (sol, _) = Case::DiscGauge.solve(24);
    let base = energy_top::<Disc>(&mesh, &sol.map, &conn, &bc).unwrap();
    let interior: Vec<usize> = (0..mesh.len()).filter(|k| bc.get(*k).is_none()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let centre = mesh.position(interior[rng.gen_range(0..interior.len())]);
        let amp = Complex64::from_polar(rng.gen_range(0.01..0.1), rng.gen_range(0.0..6.3));
        let radius = rng.gen_range(0.1..0.3);
        let mut u = sol.map.clone();
        for &k in &interior {
            let r = (mesh.position(k) - centre).norm() / radius;
            if r < 1.0 {
                u.values[k] += amp * (1.0 - r * r).powi(2);
            }
        }
        let rep = energy_top::<Disc>(&mesh, &u, &conn, &bc).unwrap();
        assert!((rep.top - base.top).abs() < 1e-12, "{:e}", rep.top - base.top);
        assert!(rep.geom > base.geom);
    }
}

/// Sliding boundary values along their germs changes the topological
/// energy only by discretization error.
#[test]
fn boundary_slides_change_topological_energy_at_second_order() {
    let deltas: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let (mesh, conn, bc) = germ_problem(n);
            let (sol, _) = Case::DiscGauge.solve(n);
            let base = energy_top::<Disc>(&mesh, &sol.map, &conn, &bc).unwrap().top;
            let mut u = sol.map.clone();
            for (&k, constraint) in &bc.constraints {
                if let NodeConstraint::Germ(g) = constraint {
                    let z = mesh.position(k);
                    let d = g.parameter_of(u.values[k]) + 0.2 * (3.0 * z.re + 2.0 * z.im).sin();
                    u.values[k] = g.point_at(d);
                }
            }
            (energy_top::<Disc>(&mesh, &u, &conn, &bc).unwrap().top - base).abs()
        })
        .collect();
    assert!(deltas[0] / deltas[1] > 3.0 && deltas[1] / deltas[2] > 3.0, "{deltas:?}");
}

#[test]
fn constant_germs_carry_no_boundary_term() {
    let mesh = rectangle(1.0, 16);
    let germ = GeodesicGerm::new(BoundaryPoint::new(0.7), c(0.1, 0.2)).unwrap();
    let bc = BoundaryCondition::germs(&mesh, |_| germ);
    let u = GridMap::from_fn::<Disc>(&mesh, |z| {
        if bc.get(mesh.nodes().iter().position(|p| p.z == z).unwrap()).is_some() {
            germ.point_at(z.re - z.im)
        } else {
            c(0.1 * z.re, 0.1 * z.im)
        }
    });
    let rep = energy_top::<Disc>(&mesh, &u, &GridConnection::zero(&mesh), &bc).unwrap();
    assert!(rep.boundary_term.abs() < 1e-12);
}

#[test]
fn beta_vanishes_for_resting_germs() {
    let germ = GeodesicGerm::new(BoundaryPoint::new(-1.2), c(0.3, -0.1)).unwrap();
    let ds: Vec<f64> = (0..40).map(|k| -2.0 + 0.25 * k as f64).collect();
    let zero = beta_form(&LieElement::new(0.0, c(0.0, 0.0)), &germ, 0.0, 0.0, 0.0, &ds);
    assert!(zero.iter().all(|b| b.abs() < 1e-14));
    // a connection translating along the germ is tangent to it
    let along = germ.tangent_generator() * 0.7;
    let tangent = beta_form(&along, &germ, 0.0, 0.0, 0.0, &ds);
    assert!(tangent.iter().all(|b| b.abs() < 1e-9), "{tangent:?}");
}

#[test]
fn beta_is_independent_of_the_transporting_generator() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let germ = GeodesicGerm::new(
            BoundaryPoint::new(rng.gen_range(-3.0..3.0)),
            Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(-3.0..3.0)),
        )
        .unwrap();
        let a = LieElement::new(rng.gen_range(-1.0..1.0), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let (re, ro) = (boundary_rate(&a, germ.endpoint()), rng.gen_range(-1.0..1.0));
        // beyond d ≈ 5 the factor 1/(1-|w|²) ≈ e^{2d} amplifies rounding
        let ds: Vec<f64> = (0..20).map(|k| 0.25 * k as f64).collect();
        let b0 = beta_form(&a, &germ, re, ro, 0.0, &ds);
        let b1 = beta_form(&a, &germ, re, ro, rng.gen_range(-2.0..2.0), &ds);
        for (x, y) in b0.iter().zip(&b1) {
            assert!((x - y).abs() < 1e-8, "{x} {y}");
        }
    }
}

/// When the germ endpoint moves as the connection transports it, `β_A`
/// stays bounded along the germ all the way out to its endpoint.
#[test]
fn beta_is_bounded_towards_the_endpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let germ = GeodesicGerm::new(
            BoundaryPoint::new(rng.gen_range(-3.0..3.0)),
            Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(-3.0..3.0)),
        )
        .unwrap();
        let a = LieElement::new(rng.gen_range(-1.0..1.0), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rate = boundary_rate(&a, germ.endpoint());
        let ds: Vec<f64> = (0..=60).map(|k| 0.25 * k as f64).collect();
        let b = beta_form(&a, &germ, rate, rng.gen_range(-1.0..1.0), 0.0, &ds);
        let tail = b[40..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let head = b[..=20].iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(tail.is_finite() && tail <= 2.0 * head + 10.0, "head {head} tail {tail}");
        // the mismatched rate makes the same samples blow up
        let wrong = beta_form(&a, &germ, rate + 0.5, 0.0, 0.0, &ds);
        assert!(wrong[60].abs() > 1e3 * (1.0 + tail));
    }
}
