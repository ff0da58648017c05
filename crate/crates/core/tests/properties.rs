use doptimal::designmat::Circulant;
use doptimal::seqcore::paf_vector;
use doptimal::{
    compress, dft, enumerate_params, paf, pair_to_params, params_to_pair, psd, psd_at_multiples,
    sequence_to_subset, subset_to_sequence, BinarySequence, PairXY,
};
use proptest::prelude::*;

fn binary(max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len)
        .prop_map(|bits| bits.into_iter().map(|b| if b { 1 } else { -1 }).collect())
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

proptest! {
    #[test]
    fn subset_round_trip(v in 1u32..80, mask in prop::collection::vec(prop::bool::ANY, 80)) {
        let subset: Vec<u32> = (0..v).filter(|&i| mask[i as usize]).collect();
        let seq = subset_to_sequence(&subset, v).unwrap();
        prop_assert_eq!(sequence_to_subset(&seq), subset);
    }

    #[test]
    fn wiener_khinchin(a in binary(64)) {
        let pafs: Vec<i32> = paf_vector(&a).into_iter().map(|p| p as i32).collect();
        let via_paf = dft(&pafs);
        for (k, p) in psd(&a).into_iter().enumerate() {
            prop_assert!((via_paf[k].re - p).abs() < 1e-6);
            prop_assert!(via_paf[k].im.abs() < 1e-6);
        }
    }

    #[test]
    fn parseval(a in binary(64)) {
        let v = a.len() as f64;
        let total: f64 = psd(&a).iter().sum();
        prop_assert!((total - v * v).abs() <= 1e-6 * v * v);
        prop_assert!(psd(&a).iter().all(|&p| p >= -1e-6));
    }

    #[test]
    fn paf_is_symmetric(a in binary(64)) {
        let v = a.len();
        for s in 1..v {
            prop_assert_eq!(paf(&a, s).unwrap(), paf(&a, v - s).unwrap());
        }
        prop_assert_eq!(paf(&a, 0).unwrap(), v as i64);
    }

    #[test]
    fn compression_preserves_sum_and_parity(a in binary(60)) {
        let v = a.len();
        for d in divisors(v) {
            let m = (v / d) as i32;
            let c = compress(&a, d).unwrap();
            prop_assert_eq!(c.sum(), a.iter().map(|&x| x as i64).sum::<i64>());
            prop_assert!(c.terms().iter().all(|&e| e.abs() <= m && (m - e) % 2 == 0));
        }
    }

    #[test]
    fn compression_theorem(a in binary(60)) {
        let v = a.len();
        for d in divisors(v) {
            let full = psd_at_multiples(&a, d).unwrap();
            let compressed = psd(compress(&a, d).unwrap().terms());
            for s in 0..d {
                prop_assert!((full[s] - compressed[s]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn compressed_paf_identity(a in binary(48)) {
        let v = a.len();
        for d in divisors(v) {
            let m = v / d;
            let c = compress(&a, d).unwrap();
            for s in 0..d {
                let direct: i64 = (0..d).map(|i| (c.terms()[i] * c.terms()[(i + s) % d]) as i64).sum();
                let folded: i64 = (0..m)
                    .map(|j| {
                        let shift = (s + j * d) % v;
                        (0..v).map(|i| (a[i] * a[(i + shift) % v]) as i64).sum::<i64>()
                    })
                    .sum();
                prop_assert_eq!(direct, folded);
            }
        }
    }

    #[test]
    fn circulants_commute(v in 1u32..30, xs in prop::collection::vec(prop::bool::ANY, 30), ys in prop::collection::vec(prop::bool::ANY, 30)) {
        let x: Vec<u32> = (0..v).filter(|&i| xs[i as usize]).collect();
        let y: Vec<u32> = (0..v).filter(|&i| ys[i as usize]).collect();
        let cx = Circulant::from_subset(&x, v).unwrap();
        let cy = Circulant::from_subset(&y, v).unwrap();
        prop_assert_eq!(cx.mul(&cy), cy.mul(&cx));
        // circulant product agrees with dense multiplication
        let (dx, dy) = (cx.to_dense(), cy.to_dense());
        let n = v as usize;
        let dense: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| dx[i][k] * dy[k][j]).sum()).collect())
            .collect();
        prop_assert_eq!(cx.mul(&cy).to_dense(), dense);
    }
}

#[test]
fn binary_sequence_rejects_non_binary() {
    assert!(BinarySequence::new(vec![1, -1, 2]).is_err());
}

#[test]
fn pair_bijection_up_to_1000() {
    let mut seen = 0;
    for x in 0i64..40 {
        for y in 0..=x {
            let q = pair_to_params(PairXY::new(x, y).unwrap());
            if q.v() > 1000 {
                continue;
            }
            seen += 1;
            assert!(q.is_doptimal(), "{q}");
            assert_eq!(params_to_pair(&q).unwrap(), PairXY::new(x, y).unwrap());
            let n = (x + 1) * x / 2 + (y + 1) * y / 2;
            assert_eq!(q.n(), n);
        }
    }
    // (0,0) plus every set enumerated up to 1000
    assert_eq!(seen, enumerate_params(1000).len() + 1);
}

#[test]
fn enumerated_sets_satisfy_identities() {
    for q in enumerate_params(999) {
        let (v, r, s, l) = (q.v() as i64, q.r() as i64, q.s() as i64, q.lambda() as i64);
        assert_eq!(l * (v - 1), r * (r - 1) + s * (s - 1), "{q}");
        assert_eq!(v, 2 * (r + s - l) + 1, "{q}");
        assert!(2 * r <= v && r >= s && s >= 0, "{q}");
        assert_eq!((v - 2 * r).pow(2) + (v - 2 * s).pow(2), 4 * v - 2, "{q}");
    }
}
