use dynaheight::bounds::{
    certificate, sample_intersection, structure_degree_bound, verify_bounded, CertifyOptions,
};
use dynaheight::heights::{canonical_height, DEFAULT_TARGET_ERROR};
use dynaheight::varieties::{build_periodic, AmbientVariety, Signature};
use dynaheight::Poly;

fn f() -> Poly {
    "x^2 + 1".parse().unwrap()
}

#[test]
fn line_is_bounded() {
    let x = AmbientVariety::parse("x2 = x1 + 1", 2, 1).unwrap();
    let r = verify_bounded(&x, &f(), 1, 16, 64, &CertifyOptions::default()).unwrap();
    assert_eq!(r.status, "bounded");
    assert_eq!(r.signatures.len(), 4);
    assert!(r.samples.len() > 20, "{}", r.samples.len());
    for s in &r.samples {
        assert!(s.height.lo() <= s.bound);
    }
}

#[test]
fn canonical_height_shrinks_along_iterates() {
    let x = AmbientVariety::parse("x2 = x1 + 1", 2, 1).unwrap();
    let sig = Signature::new(2, vec![], vec![vec![1, 2]]).unwrap();
    let cert = certificate(&x, &sig, &f()).unwrap();
    let c5 = cert.constants_used[0].constants.c5;
    let mut prev = f64::INFINITY;
    for l in 1..=4u32 {
        let g = f().iterate(l, 1 << 10).unwrap();
        let v = build_periodic(sig.clone(), vec![], vec![vec![g]], &f(), None).unwrap();
        let s = sample_intersection(&x, &v, 100).unwrap();
        assert_eq!(s.points.len(), 1 << l);
        let mut max_hat = 0.0f64;
        for (p, h) in s.points.iter().zip(&s.heights) {
            assert!(h.lo() <= cert.c1);
            let hat = canonical_height(&f(), &p[0], DEFAULT_TARGET_ERROR).unwrap();
            assert!(((1u64 << l) - 1) as f64 * hat.lo() <= c5);
            max_hat = max_hat.max(hat.value);
        }
        assert!(max_hat <= prev + 1e-9);
        prev = max_hat;
    }
}

#[test]
fn multi_chain_certificate() {
    let x = AmbientVariety::parse("x2 = x1 + 1\nx3 = x1 + 2", 3, 1).unwrap();
    let sig = Signature::new(3, vec![], vec![vec![1], vec![2, 3]]).unwrap();
    let c = certificate(&x, &sig, &f()).unwrap();
    assert_eq!(c.constants_used.len(), 2);
    assert!(c.c1.is_finite() && c.c1 > 0.0);
    for l in 0..=2u32 {
        let g = f().iterate(l, 1 << 10).unwrap();
        let v = build_periodic(sig.clone(), vec![], vec![vec![], vec![g]], &f(), None).unwrap();
        let s = sample_intersection(&x, &v, 100).unwrap();
        assert_eq!(s.points.len(), if l == 0 { 0 } else { 1 << l });
        for h in &s.heights {
            assert!(h.lo() <= c.c1);
        }
    }
}

#[test]
fn surface_descends_recursively() {
    let x = AmbientVariety::parse("x3 = x1 + x2", 3, 2).unwrap();
    let sig = Signature::new(3, vec![], vec![vec![1, 2, 3]]).unwrap();
    let c = certificate(&x, &sig, &f()).unwrap();
    assert!(c.c1.is_finite());
    assert!(!c.descents.is_empty());
}

#[test]
fn constant_signature_uses_direct_bound() {
    let x = AmbientVariety::parse("x2 = x1 + 1", 2, 1).unwrap();
    let sig = Signature::new(2, vec![1], vec![vec![2]]).unwrap();
    let c = certificate(&x, &sig, &f()).unwrap();
    assert!(c.descents.is_empty());
    let fixed = dynaheight::bounds::affine_fixed_points(&f()).unwrap();
    for z in fixed {
        let v = build_periodic(sig.clone(), vec![z], vec![vec![]], &f(), None).unwrap();
        let s = sample_intersection(&x, &v, 4).unwrap();
        assert_eq!(s.points.len(), 1);
        assert!(s.heights[0].lo() <= c.c1);
    }
}

#[test]
fn structure_is_sample_independent() {
    let x = AmbientVariety::parse("x2 - x1 - 1", 2, 1).unwrap();
    let a = structure_degree_bound(&x, &f(), &CertifyOptions { samples: 4, seed: 0 }).unwrap();
    let b = structure_degree_bound(&x, &f(), &CertifyOptions { samples: 8, seed: 0 }).unwrap();
    assert_eq!(a.hypersurfaces, b.hypersurfaces);
    let g: Poly = "x^3 + x".parse().unwrap();
    let s = structure_degree_bound(&x, &g, &CertifyOptions::default()).unwrap();
    assert!(s.hypersurfaces.iter().any(|h| h.g.starts_with('-')));
}
