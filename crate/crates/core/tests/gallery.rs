use num_complex::Complex64;
use polarmap_core::gallery::bryant::{superminimal_surface, BryantCurve, MeromorphicPair};
use polarmap_core::gallery::s3::{CliffordTorus, ConformalGaussMap, GaussMap, InS4};
use polarmap_core::gallery::weierstrass::{MinimalSurfaceR3, WeierstrassData};
use polarmap_core::poly::{qi, qi_ratio, Poly, RatFn};
use polarmap_core::BranchedSurface;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    surface: BranchedSurface,
    /// Sampling box for `z`.
    square: f64,
    /// Points closer than this to the origin are skipped.
    hole: f64,
}

fn cases() -> Vec<Case> {
    let pi = std::f64::consts::PI;
    let mut out = vec![
        Case {
            surface: BranchedSurface::exact("clifford", CliffordTorus).unwrap(),
            square: pi,
            hole: 0.0,
        },
        Case {
            surface: BranchedSurface::exact("gauss", GaussMap::new(CliffordTorus).unwrap())
                .unwrap(),
            square: pi,
            hole: 0.0,
        },
        Case {
            surface: BranchedSurface::exact(
                "conformal",
                ConformalGaussMap::new(CliffordTorus).unwrap(),
            )
            .unwrap(),
            square: pi,
            hole: 0.0,
        },
        Case {
            surface: BranchedSurface::exact(
                "in-s4",
                InS4::new(GaussMap::new(CliffordTorus).unwrap()).unwrap(),
            )
            .unwrap(),
            square: pi,
            hole: 0.0,
        },
        Case {
            surface: superminimal_surface("bryant", MeromorphicPair::monomials(5, 2), 1.0).unwrap(),
            square: 0.7,
            hole: 0.05,
        },
    ];
    for data in [
        WeierstrassData::Catenoid,
        WeierstrassData::Helicoid,
        WeierstrassData::Enneper,
    ] {
        let s = MinimalSurfaceR3::new(data.clone()).unwrap();
        out.push(Case {
            surface: BranchedSurface::exact(data.name(), s).unwrap(),
            square: 1.0,
            hole: 0.0,
        });
    }
    out
}

fn random_z(rng: &mut ChaCha8Rng, c: &Case) -> [f64; 2] {
    loop {
        let z = [
            rng.gen_range(-c.square..c.square),
            rng.gen_range(-c.square..c.square),
        ];
        if z[0].hypot(z[1]) > c.hole {
            return z;
        }
    }
}

#[test]
fn conformal_at_a_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in cases() {
        for _ in 0..1000 {
            let z = random_z(&mut rng, &c);
            let (e, res) = c.surface.conformal_factor(z).unwrap();
            assert!(
                e > 0.0 && res < 1e-8 * e.max(1.0),
                "{} at {z:?}: E = {e}, residual {res}",
                c.surface.name()
            );
        }
    }
}

#[test]
fn quadric_minimality_and_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for c in cases() {
        let space = c.surface.ambient();
        for _ in 0..100 {
            let z = random_z(&mut rng, &c);
            let name = c.surface.name();
            assert!(
                c.surface.jet(z).unwrap().quadric_residual(&space) < 1e-12,
                "{name}"
            );
            assert!(c.surface.frame_gram_residual(z).unwrap() < 1e-8, "{name}");
            let (e, _) = c.surface.conformal_factor(z).unwrap();
            assert!(
                c.surface.minimality_residual(z).unwrap() < 1e-8 * e.max(1.0),
                "{name}"
            );
            for n in &c.surface.frame(z).unwrap().normals {
                let a = c.surface.shape_operator(z, n).unwrap();
                let scale = a.max_abs().max(1.0);
                assert!(a.asymmetry() < 1e-8 * scale, "{name}: asymmetric A_w");
                assert!(
                    a.trace().abs() < 1e-6 * scale,
                    "{name}: trace {}",
                    a.trace()
                );
            }
        }
    }
}

#[test]
fn bryant_curve_is_horizontal_at_sample_points() {
    let c = BryantCurve::new(MeromorphicPair::monomials(5, 2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        assert!(c.horizontality_at(z).unwrap() < 1e-8);
    }
}

#[test]
fn cubic_pair_matches_hand_differentiation() {
    // h = φ'/(2ψ') = 3z²/2, c1 = φ - ψ h = z³ - 3z³/2.
    let c = BryantCurve::new(MeromorphicPair::monomials(3, 1)).unwrap();
    let [c1, c2, c3] = c.components();
    assert_eq!(
        c1,
        &RatFn::poly(Poly::monomial(qi_ratio((-1, 2), (0, 1)), 3))
    );
    assert_eq!(c2, &RatFn::poly(Poly::monomial(qi(1, 0), 1)));
    assert_eq!(
        c3,
        &RatFn::poly(Poly::monomial(qi_ratio((3, 2), (0, 1)), 2))
    );
}

#[test]
fn bryant_z5_z2_branch_data() {
    let s = superminimal_surface("b", MeromorphicPair::monomials(5, 2), 1.0).unwrap();
    let b = s.branch_points();
    assert_eq!(b.len(), 1);
    assert_eq!((b[0].z, b[0].order), ([0.0, 0.0], 1));
    assert_eq!(s.conformal_factor([0.0, 0.0]).unwrap().0, 0.0);
    let m = s.branch_order_estimate([0.0, 0.0]).unwrap();
    assert!((m - 1.0).abs() < 0.05, "{m}");
}

#[test]
fn unbranched_pair_has_positive_conformal_factor() {
    let s = superminimal_surface("u", MeromorphicPair::monomials(2, 1), 1.0).unwrap();
    assert!(s.branch_points().is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let r: f64 = rng.gen_range(0.0..0.99);
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        assert!(s.conformal_factor([r * th.cos(), r * th.sin()]).unwrap().0 > 0.0);
    }
}
