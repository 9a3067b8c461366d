//! Property tests for the exact algebra layer: ring axioms, the Leibniz
//! rule, evaluation homomorphisms, implicit-series self-consistency and
//! classification invariances.

use proptest::prelude::*;

use opf_core::classify::classify_hyperbolic;
use opf_core::exactpoly::{
    compose_series, rat, solve_implicit_series, BiPoly, Rat, UniPoly, Var,
};

fn coef() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Sparse bivariate polynomials of total degree at most 6.
fn bipoly() -> impl Strategy<Value = BiPoly> {
    proptest::collection::vec(((0u32..=6, 0u32..=6), coef()), 0..6).prop_map(|terms| {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            if i + j <= 6 {
                p = &p + &BiPoly::monomial(c, i, j);
            }
        }
        p
    })
}

fn unipoly() -> impl Strategy<Value = UniPoly> {
    proptest::collection::vec(coef(), 0..7).prop_map(UniPoly::from_coeffs)
}

proptest! {
    #[test]
    fn distributivity((p, q, r) in (bipoly(), bipoly(), bipoly())) {
        let lhs = &(&p + &q) * &r;
        let rhs = &(&p * &r) + &(&q * &r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule((p, q) in (bipoly(), bipoly())) {
        for var in [Var::V, Var::X] {
            let lhs = (&p * &q).diff(var);
            let rhs = &(&p.diff(var) * &q) + &(&p * &q.diff(var));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn eval_is_a_ring_homomorphism((p, q, a, b) in (bipoly(), bipoly(), coef(), coef())) {
        let prod = (&p * &q).eval_rat(&a, &b);
        let sep = p.eval_rat(&a, &b) * q.eval_rat(&a, &b);
        prop_assert_eq!(prod, sep);
        let sum = (&p + &q).eval_rat(&a, &b);
        let sep = p.eval_rat(&a, &b) + q.eval_rat(&a, &b);
        prop_assert_eq!(sum, sep);
    }

    #[test]
    fn division_reconstructs((p, d) in (unipoly(), unipoly())) {
        prop_assume!(!d.is_zero());
        let (q, r) = p.div_rem(&d);
        let back = &(&q * &d) + &r;
        prop_assert_eq!(back, p);
        if let (Some(rd), Some(dd)) = (r.degree(), d.degree()) {
            prop_assert!(rd < dd);
        }
    }

    #[test]
    fn lex_division_reconstructs((p, d) in (bipoly(), bipoly())) {
        prop_assume!(!d.is_zero());
        let (q, r) = p.div_rem_lex(&d);
        let back = &(&q * &d) + &r;
        prop_assert_eq!(back, p);
    }

    #[test]
    fn implicit_series_self_consistency(
        (lin_n, raw) in (proptest::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), bipoly())
    ) {
        // strip constant and linear terms so the jet precondition holds
        let mut b = BiPoly::zero();
        for (&(i, j), c) in raw.terms() {
            if i + j >= 2 {
                b = &b + &BiPoly::monomial(c.clone(), i, j);
            }
        }
        let lin = rat(lin_n, 1);
        let trunc = 10;
        let f = solve_implicit_series(&lin, &b, trunc).unwrap();
        // lin·f + b(s, f) ≡ 0 mod s^(trunc+1), exactly
        let residual = compose_series(&b, &f, Var::X).add(&f.scale(&lin));
        prop_assert!(residual.is_zero(), "residual {:?}", residual);
    }

    #[test]
    fn hyperbolic_kind_invariant_under_swap_and_positive_scaling(
        (re1, im, re2, scale) in (-5.0f64..5.0, 0.0f64..5.0, -5.0f64..5.0, 0.1f64..10.0)
    ) {
        // build either a real pair or a conjugate pair
        let (l1, l2) = if im < 2.5 { ((re1, 0.0), (re2, 0.0)) } else { ((re1, im), (re1, -im)) };
        let base = classify_hyperbolic(l1, l2);
        let swapped = classify_hyperbolic(l2, l1);
        let scaled = classify_hyperbolic((l1.0 * scale, l1.1 * scale), (l2.0 * scale, l2.1 * scale));
        match base {
            Ok(c) => {
                prop_assert_eq!(c.kind, swapped.unwrap().kind);
                prop_assert_eq!(c.kind, scaled.unwrap().kind);
            }
            Err(_) => {
                prop_assert!(swapped.is_err());
                prop_assert!(scaled.is_err());
            }
        }
    }
}
