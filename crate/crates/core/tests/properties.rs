//! Property tests for the invariants that should survive arbitrary inputs,
//! not just the seeded corpus.

use proptest::prelude::*;
use qwlct_core::grid::Grid2D;
use qwlct_core::quat::Quaternion;
use qwlct_core::signal::{self, lp_norm, norm_sq, scalar_inner, QSignal2D};
use qwlct_core::{io, qft};

fn arb_grid() -> impl Strategy<Value = Grid2D> {
    (2usize..6, 2usize..6, -2.0f64..2.0, -2.0f64..2.0, 0.05f64..1.0, 0.05f64..1.0)
        .prop_map(|(n1, n2, x1, x2, d1, d2)| Grid2D::new(n1, n2, x1, x2, d1, d2).unwrap())
}

fn arb_signal() -> impl Strategy<Value = QSignal2D> {
    arb_grid().prop_flat_map(|g| {
        let len = g.len();
        proptest::collection::vec(
            (-100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0),
            len..=len,
        )
        .prop_map(move |vals| {
            let samples = vals
                .into_iter()
                .map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
                .collect();
            QSignal2D::from_samples(g, samples).unwrap()
        })
    })
}

fn arb_pair() -> impl Strategy<Value = (QSignal2D, QSignal2D)> {
    arb_grid().prop_flat_map(|g| {
        let len = g.len();
        let one = move || {
            proptest::collection::vec(
                (-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0),
                len..=len,
            )
            .prop_map(move |vals| {
                let samples = vals
                    .into_iter()
                    .map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
                    .collect();
                QSignal2D::from_samples(g, samples).unwrap()
            })
        };
        (one(), one())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_schwarz(pair in arb_pair()) {
        let (f, g) = pair;
        let lhs = scalar_inner(&f, &g).unwrap().abs();
        let rhs = lp_norm(&f, 2.0).unwrap() * lp_norm(&g, 2.0).unwrap();
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn polarization_consistency(f in arb_signal()) {
        let ip = scalar_inner(&f, &f).unwrap();
        let n2 = lp_norm(&f, 2.0).unwrap().powi(2);
        prop_assert!((ip - n2).abs() <= 1e-10 * n2.max(1e-30));
    }

    #[test]
    fn modulation_is_isometric(f in arb_signal(), s1 in -30.0f64..30.0, s2 in -30.0f64..30.0) {
        let m = signal::modulate(&f, (s1, s2)).unwrap();
        let a = norm_sq(&m);
        let b = norm_sq(&f);
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-30));
    }

    #[test]
    fn qsig_binary_round_trip(f in arb_signal()) {
        let mut buf = Vec::new();
        io::write_qsig(&f, &mut buf).unwrap();
        let back = io::read_qsig(buf.as_slice()).unwrap();
        prop_assert_eq!(back.samples(), f.samples());
        prop_assert_eq!(back.grid(), f.grid());
    }

    #[test]
    fn csv_round_trip(f in arb_signal()) {
        let mut buf = Vec::new();
        io::write_csv(&f, &mut buf).unwrap();
        let back = io::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.samples(), f.samples());
    }

    #[test]
    fn naive_transform_is_linear(pair in arb_pair(), lam in -3.0f64..3.0) {
        let (f, g) = pair;
        let combo = f.scale(lam).unwrap().add(&g).unwrap();
        let freq = f.grid().freq_grid();
        let w1s = [freq.coord1(0), freq.coord1(freq.n1() - 1)];
        let w2s = [freq.coord2(freq.n2() / 2)];
        let cell = f.grid().cell_area();
        let lhs = qft::two_sided_naive(&combo, &w1s, &w2s, -1, cell);
        let fa = qft::two_sided_naive(&f, &w1s, &w2s, -1, cell);
        let fb = qft::two_sided_naive(&g, &w1s, &w2s, -1, cell);
        for ((l, a), b) in lhs.iter().zip(&fa).zip(&fb) {
            let rhs = a.scale(lam) + *b;
            let scale = l.norm().max(rhs.norm()).max(1.0);
            prop_assert!((*l - rhs).norm() <= 1e-12 * scale);
        }
    }
}
