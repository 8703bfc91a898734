use num_complex::Complex64;
use specenc_core::corpus::random_nonnegative;
use specenc_core::norms::{aux_norm, ks_lemma_ratio, ks_norm, NormKind, NormRequest, Witness};
use specenc_core::potential::PotentialSpec;

fn gaussian() -> PotentialSpec<f64> {
    PotentialSpec::gaussian(3, Complex64::new(1.0, 0.0), 0.25, &[0.5; 3], 3.0).unwrap()
}

#[test]
fn wider_search_never_decreases() {
    for v in random_nonnegative::<f64>(4, 11).unwrap() {
        let narrow = ks_norm(&v, &NormRequest::ks(3, 2.0, 1.0).with_depth(0, 1)).unwrap();
        let wide = ks_norm(&v, &NormRequest::ks(3, 2.0, 1.0).with_depth(-2, 3)).unwrap();
        assert!(wide.value >= narrow.value);
        for pair in wide.trace.windows(2) {
            assert!(pair[1].value >= pair[0].value);
        }
    }
}

#[test]
fn pruning_matches_exhaustive_search() {
    for v in random_nonnegative::<f64>(4, 5).unwrap() {
        let req = NormRequest::ks(3, 1.5, 1.0).with_depth(-1, 3);
        let fast = ks_norm(&v, &req).unwrap();
        let full = ks_norm(
            &v,
            &NormRequest {
                exhaustive: true,
                ..req
            },
        )
        .unwrap();
        assert!((fast.value - full.value).abs() <= 1e-12 * full.value);
        assert_eq!(fast.witness, full.witness);
    }
}

#[test]
fn homogeneity_in_the_coupling() {
    let v = gaussian();
    for beta in [1.0, 1.4] {
        let base = ks_norm(&v, &NormRequest::ks(3, 2.0, beta)).unwrap().value;
        for c in [Complex64::new(3.0, 0.0), Complex64::new(0.0, -0.5)] {
            let scaled = ks_norm(&v.scale(c).unwrap(), &NormRequest::ks(3, 2.0, beta))
                .unwrap()
                .value;
            let expect = c.norm().powf(beta) * base;
            assert!(
                (scaled - expect).abs() < 1e-10 * expect,
                "{scaled} {expect}"
            );
        }
    }
}

#[test]
fn dilation_scales_by_t_to_minus_alpha() {
    for v in [PotentialSpec::unit_cube(3, 1.0).unwrap(), gaussian()] {
        for alpha in [1.5, 2.0] {
            let base = ks_norm(&v, &NormRequest::ks(3, alpha, 1.0).with_depth(-2, 3))
                .unwrap()
                .value;
            for (t, shift) in [(2.0f64, 1), (4.0, 2)] {
                let req = NormRequest::ks(3, alpha, 1.0).with_depth(-2 + shift, 3 + shift);
                let got = ks_norm(&v.dilate(t).unwrap(), &req).unwrap().value;
                let expect = t.powf(-alpha) * base;
                assert!(
                    (got / expect - 1.0).abs() < 0.01,
                    "t={t} alpha={alpha}: {got} {expect}"
                );
            }
        }
    }
}

#[test]
fn ks_two_below_kato() {
    for v in random_nonnegative::<f64>(8, 3).unwrap() {
        let ks = ks_norm(&v, &NormRequest::ks(3, 2.0, 1.0)).unwrap().value;
        let kato = aux_norm(&v, &NormRequest::new(NormKind::Kato, 3).with_level(4))
            .unwrap()
            .value;
        assert!(ks <= 1.02 * kato, "{ks} > {kato}");
    }
}

#[test]
fn kato_is_translation_invariant() {
    let a = PotentialSpec::ball(3, Complex64::new(1.0, 0.0), 0.5, &[0.0; 3]).unwrap();
    let b = PotentialSpec::ball(3, Complex64::new(1.0, 0.0), 0.5, &[1.25, -0.5, 3.0]).unwrap();
    let req = NormRequest::new(NormKind::Kato, 3).with_level(4);
    let (x, y) = (aux_norm(&a, &req).unwrap(), aux_norm(&b, &req).unwrap());
    assert!((x.value - y.value).abs() < 1e-9 * x.value);
    let (Some(Witness::Point { x: p }), Some(Witness::Point { x: q })) = (x.witness, y.witness)
    else {
        panic!()
    };
    assert!((q[0] - p[0] - 1.25).abs() < 1e-12);
}

#[test]
fn lemma_ratio_is_scale_free() {
    let w = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
    let req = NormRequest::ks(3, 2.0, 1.0).with_depth(-2, 2);
    let base = ks_lemma_ratio(&w, 2.0, 4, &req).unwrap();
    assert!(base.ratio.is_finite() && base.ratio > 0.0);
    let t = 2.0;
    let shifted = req.clone().with_depth(-1, 3);
    let small = ks_lemma_ratio(&w.dilate(t).unwrap(), 2.0, 4, &shifted).unwrap();
    assert!(
        (small.ratio / base.ratio - 1.0).abs() < 0.02,
        "{base:?} {small:?}"
    );
    assert!((small.operator_norm * t * t / base.operator_norm - 1.0).abs() < 1e-6);
    let zero = PotentialSpec::<f64>::unit_cube(3, 0.0).unwrap();
    assert!(ks_lemma_ratio(&zero, 2.0, 3, &req).is_err());
}
