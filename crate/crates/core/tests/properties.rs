use proptest::prelude::*;
use sharpbound::discretize::Grid;
use sharpbound::eigensolve::{self, EIGEN_TOL};
use sharpbound::functionals::{self, Numerics};
use sharpbound::quadrature::{self, DensityOnGrid};
use sharpbound::Potential;

fn family() -> impl Strategy<Value = Potential> {
    prop_oneof![
        (0.5..2.0f64).prop_map(|w| Potential::harmonic(w).unwrap()),
        (0.5..2.0f64).prop_map(|a| Potential::quartic(a).unwrap()),
        (0.0..2.0f64, 0.5..1.5f64).prop_map(|(a, b)| Potential::anharmonic_mix(a, b).unwrap()),
        (0.5..1.5f64, 0.0..2.0f64).prop_map(|(a, b)| Potential::double_well(a, b).unwrap()),
        (1.0..4.0f64).prop_map(|p| Potential::abs_power(p).unwrap()),
    ]
}

fn density(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3..1.0f64, n)
}

fn deficit(v: &Potential, t: f64) -> f64 {
    functionals::keller_deficit(v, t, &Numerics::default()).unwrap().deficit
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deficit_invariant_under_translation_and_shift(
        v in family(), t in 0.5..2.0f64, a in -2.0..2.0f64, kappa in -5.0..5.0f64,
    ) {
        let w = v.translate_and_shift(&[a], kappa).unwrap();
        prop_assert!((deficit(&w, t) - deficit(&v, t)).abs() < 1e-6);
    }

    #[test]
    fn deficit_covariant_under_rescaling(v in family(), t in 0.5..2.0f64, s in 0.5..2.0f64) {
        let d = deficit(&v, t);
        let scaled = deficit(&v.rescale(s).unwrap(), t / (s * s));
        prop_assert!((scaled - s * s * d).abs() <= 1e-4 * (s * s * d).abs().max(1e-3));
    }

    #[test]
    fn deficit_is_nonnegative(v in family(), t in 0.25..4.0f64) {
        let r = functionals::keller_deficit(&v, t, &Numerics::default().refined()).unwrap();
        prop_assert!(r.deficit >= -1e-7, "{}", r.deficit);
    }

    #[test]
    fn rayleigh_quotient_bounds_ground_energy(
        v in family(), width in 0.3..2.0f64, center in -1.0..1.0f64, bump in -0.9..0.9f64,
    ) {
        let grid = Grid::line(-8.0, 8.0, 2001).unwrap();
        let op = eigensolve::assemble(&v, &grid).unwrap();
        let e0 = eigensolve::lowest_eigenvalues(&op, 1, EIGEN_TOL).unwrap()[0];
        let mut psi: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|x| {
                let u = (x - center) / width;
                (-u * u / 2.0).exp() * (1.0 + bump * u.sin())
            })
            .collect();
        let n = psi.len();
        psi[0] = 0.0;
        psi[n - 1] = 0.0;
        let norm: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
        psi.iter_mut().for_each(|p| *p /= norm.sqrt());
        let q = eigensolve::rayleigh_quotient(&psi, &v, &grid).unwrap();
        prop_assert!(q >= e0 - 1e-8, "{q} < {e0}");
    }

    #[test]
    fn sturm_counts_bracket_eigenvalues(v in family()) {
        let grid = Grid::line(-6.0, 6.0, 801).unwrap();
        let op = eigensolve::assemble(&v, &grid).unwrap();
        let ev = eigensolve::lowest_eigenvalues(&op, 6, EIGEN_TOL).unwrap();
        for (k, e) in ev.iter().enumerate() {
            prop_assert_eq!(op.sturm_count(e - 1e-7), k);
            prop_assert_eq!(op.sturm_count(e + 1e-7), k + 1);
        }
    }

    #[test]
    fn ground_energy_is_monotone_in_the_potential(a in 0.5..2.0f64, c in 0.0..1.0f64) {
        let grid = Grid::line(-6.0, 6.0, 1001).unwrap();
        let e = |v: &Potential| {
            let op = eigensolve::assemble(v, &grid).unwrap();
            eigensolve::lowest_eigenvalues(&op, 1, EIGEN_TOL).unwrap()[0]
        };
        let low = e(&Potential::quartic(a).unwrap());
        let high = e(&Potential::anharmonic_mix(c, a).unwrap());
        let shifted = e(&Potential::quartic(a).unwrap().translate_and_shift(&[0.0], 0.1).unwrap());
        prop_assert!(high >= low - 1e-10);
        prop_assert!((shifted - low - 0.1).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn information_inequalities(p in density(12), q in density(12)) {
        let grid = Grid::counting(12).unwrap();
        let rho = DensityOnGrid::new(p, &grid).unwrap();
        let rho0 = DensityOnGrid::new(q, &grid).unwrap();
        prop_assert!(quadrature::relative_entropy(&rho, &rho0).unwrap() >= -1e-10);
        prop_assert!(functionals::ckp_gap(&rho, &rho0).unwrap() >= -1e-10);
        prop_assert!(functionals::sqrt_l1_gap(&rho, &rho0).unwrap() >= -1e-10);
    }

    #[test]
    fn l1_is_a_metric(p in density(10), q in density(10), r in density(10)) {
        let grid = Grid::counting(10).unwrap();
        let a = DensityOnGrid::new(p, &grid).unwrap();
        let b = DensityOnGrid::new(q, &grid).unwrap();
        let c = DensityOnGrid::new(r, &grid).unwrap();
        let ab = quadrature::l1_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, quadrature::l1_distance(&b, &a).unwrap());
        prop_assert_eq!(quadrature::l1_distance(&a, &a).unwrap(), 0.0);
        prop_assert!(ab <= 2.0 + 1e-12);
        let ac = quadrature::l1_distance(&a, &c).unwrap();
        let cb = quadrature::l1_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn elementary_power_exponential_bound(w in 0.0..50.0f64, p in prop::sample::select(vec![1.0, 2.0, 5.0])) {
        let lhs = w.powf(p);
        let rhs = (p / std::f64::consts::E).powf(p) * w.exp();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}

fn gaussian_mixture(grid: &Grid, centers: &[f64], widths: &[f64], weights: &[f64]) -> Vec<f64> {
    let mut psi: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| {
            centers
                .iter()
                .zip(widths)
                .zip(weights)
                .map(|((c, s), w)| w * (-(x - c) * (x - c) / (2.0 * s * s)).exp())
                .sum()
        })
        .collect();
    let n = psi.len();
    psi[0] = 0.0;
    psi[n - 1] = 0.0;
    let norm: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    psi.iter_mut().for_each(|p| *p /= norm.sqrt());
    psi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn logsob_deficit_nonnegative(
        centers in prop::collection::vec(-2.0..2.0f64, 3),
        widths in prop::collection::vec(0.4..1.5f64, 3),
        weights in prop::collection::vec(0.1..1.0f64, 3),
        lambda in 0.5..2.0f64,
    ) {
        let grid = Grid::line(-12.0, 12.0, 4001).unwrap();
        let psi = gaussian_mixture(&grid, &centers, &widths, &weights);
        prop_assert!(functionals::logsob_deficit(&psi, &grid, lambda).unwrap() >= -1e-8);
    }

    #[test]
    fn logsob_deficit_scale_invariant(
        centers in prop::collection::vec(-2.0..2.0f64, 2),
        widths in prop::collection::vec(0.4..1.5f64, 2),
        weights in prop::collection::vec(0.1..1.0f64, 2),
        lambda in 0.5..2.0f64,
        s in 0.5..2.0f64,
    ) {
        let grid = Grid::line(-10.0, 10.0, 2001).unwrap();
        let psi = gaussian_mixture(&grid, &centers, &widths, &weights);
        let scaled_grid = Grid::line(-10.0 * s, 10.0 * s, 2001).unwrap();
        let c: Vec<f64> = centers.iter().map(|c| c * s).collect();
        let w: Vec<f64> = widths.iter().map(|w| w * s).collect();
        let psi_s = gaussian_mixture(&scaled_grid, &c, &w, &weights);
        let a = functionals::logsob_deficit(&psi, &grid, lambda).unwrap();
        let b = functionals::logsob_deficit(&psi_s, &scaled_grid, lambda * s).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn second_order_convergence() {
    let v = Potential::quartic(1.0).unwrap();
    let e = |n: usize| {
        let grid = Grid::line(-6.0, 6.0, n).unwrap();
        let op = eigensolve::assemble(&v, &grid).unwrap();
        eigensolve::lowest_eigenvalues(&op, 1, 1e-13).unwrap()[0]
    };
    let (e1, e2, e3) = (e(401), e(801), e(1601));
    let order = ((e1 - e2) / (e2 - e3)).log2();
    assert!((order - 2.0).abs() < 0.05, "observed order {order}");
}

#[test]
fn gibbs_functional_bounded_below() {
    let v = Potential::double_well(1.0, 2.0).unwrap();
    let t = 0.7;
    let grid = Grid::line(-5.0, 5.0, 1001).unwrap();
    let ln_z = quadrature::log_partition(&v, t, &grid).unwrap();
    for k in 1..20 {
        let s = 0.2 + 0.1 * k as f64;
        let rho: Vec<f64> = grid.nodes().iter().map(|x| (-(x - 0.3) * (x - 0.3) / s).exp()).collect();
        let rho = DensityOnGrid::new(rho, &grid).unwrap();
        let f = functionals::gibbs_functional(&rho, &v, 1.0 / t).unwrap();
        assert!(f >= -ln_z / t - 1e-8);
    }
}
