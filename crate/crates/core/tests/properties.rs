use proptest::prelude::*;

use leibniz3::algebra::StructureTable;
use leibniz3::aut::Branch;
use leibniz3::catalog::{get_family, Family};
use leibniz3::classify::random_invertible;
use leibniz3::exact::linalg::{self, PolyMatrix};
use leibniz3::exact::{Monomial, Param, PivotContext, Poly, Rational, RewriteSystem, Substitution, Var};
use leibniz3::invariants::pi_substitution;
use leibniz3::trace::{trace_closed_form, trace_direct, Side, TraceArg, TraceWord};
use rand::SeedableRng;

fn vars() -> Vec<Var> {
    vec![
        Var::coord(1, 1),
        Var::coord(1, 3),
        Var::coord(2, 2),
        Var::Param(Param::Lambda),
        Var::Param(Param::Xi1),
        Var::Param(Param::alpha(1)),
    ]
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Rational::new(p, q))
}

fn poly() -> impl Strategy<Value = Poly> {
    let term = (rational(), prop::collection::vec(prop::sample::select(vec![0u32, 0, 0, 1, 2]), 6));
    prop::collection::vec(term, 0..5).prop_map(|ts| {
        let vs = vars();
        Poly::from_terms(
            ts.into_iter().map(|(c, es)| (Monomial::from_pairs(vs.iter().copied().zip(es).filter(|(_, e)| *e > 0)), c)),
        )
    })
}

fn coord_poly() -> impl Strategy<Value = Poly> {
    let term = (rational(), prop::collection::vec(prop::bool::weighted(0.3).prop_map(u32::from), 6));
    prop::collection::vec(term, 0..4).prop_map(|ts| {
        let vs: Vec<Var> = (1..=2).flat_map(|r| (1..=3).map(move |i| Var::coord(r, i))).collect();
        Poly::from_terms(
            ts.into_iter().map(|(c, es)| (Monomial::from_pairs(vs.iter().copied().zip(es).filter(|(_, e)| *e > 0)), c)),
        )
    })
}

fn rational_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(rational(), n), n)
}

fn to_poly_matrix(m: &[Vec<Rational>]) -> PolyMatrix {
    PolyMatrix::from_rows(m.iter().map(|r| r.iter().cloned().map(Poly::constant).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Poly::zero(), a.clone());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn substitution_is_a_ring_map(a in poly(), b in poly(), images in prop::collection::vec(poly(), 6)) {
        let sigma: Substitution = vars().into_iter().zip(images).collect();
        prop_assert_eq!((&a * &b).substitute(&sigma), &a.substitute(&sigma) * &b.substitute(&sigma));
        prop_assert_eq!((&a + &b).substitute(&sigma), &a.substitute(&sigma) + &b.substitute(&sigma));
    }

    #[test]
    fn normal_forms_are_idempotent_and_multiplicative(a in poly(), b in poly()) {
        for rw in [RewriteSystem::xi_relations(), RewriteSystem::laurent_lambda()] {
            let na = rw.normal_form(&a);
            prop_assert_eq!(rw.normal_form(&na), na.clone());
            let nb = rw.normal_form(&b);
            prop_assert_eq!(rw.normal_form(&(&a * &b)), rw.normal_form(&(&na * &nb)));
        }
    }

    #[test]
    fn nullspace_ignores_row_order(m in prop::collection::vec(prop::collection::vec(poly(), 4), 1..4), seed in any::<u64>()) {
        // keep only λ-dependence so the entries live in ℚ[λ]
        let lam_only = |p: &Poly| p.map_vars(|v| if v.is_coord() || v.param() != Some(Param::Lambda) { Var::Param(Param::Lambda) } else { v });
        let rows: Vec<Vec<Poly>> = m.iter().map(|r| r.iter().map(lam_only).collect()).collect();
        let mut permuted = rows.clone();
        let k = (seed as usize) % permuted.len();
        permuted.rotate_left(k);
        let ctx = PivotContext::generic();
        let a = linalg::nullspace(&PolyMatrix::from_rows(rows.clone()), &ctx).unwrap();
        let b = linalg::nullspace(&PolyMatrix::from_rows(permuted), &ctx).unwrap();
        prop_assert_eq!(a.len(), b.len());
        let orig = PolyMatrix::from_rows(rows);
        for v in &b {
            prop_assert!(orig.mul_vec(v).iter().all(Poly::is_zero));
        }
    }

    #[test]
    fn branch_action_composes(g in rational_matrix(3), h in rational_matrix(3), f in coord_poly()) {
        let (pg, ph) = (to_poly_matrix(&g), to_poly_matrix(&h));
        prop_assume!(!linalg::determinant(&pg).is_zero() && !linalg::determinant(&ph).is_zero());
        let bg = Branch::new("g", pg, vec![]).unwrap();
        let bh = Branch::new("h", ph, vec![]).unwrap();
        let lhs = f.substitute(&bg.action_substitution(2)).substitute(&bh.action_substitution(2));
        let rhs = f.substitute(&bg.compose(&bh).action_substitution(2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_engines_agree(entries in prop::collection::vec((0usize..3, 0usize..3, 0usize..3, rational()), 0..8), side in any::<bool>(), pair in any::<bool>()) {
        let mut t = StructureTable::zero(3);
        for (i, j, l, c) in entries {
            t.set(i, j, l, Poly::constant(c));
        }
        let s = if side { Side::L } else { Side::R };
        let arg = if pair { TraceArg::Pair(1, 2) } else { TraceArg::Single(2) };
        for w in [TraceWord::new(vec![(s, arg)]), TraceWord::new(vec![(Side::R, TraceArg::Single(1)), (s, arg)])] {
            prop_assert_eq!(trace_closed_form(&t, &w).unwrap().value, trace_direct(&t, &w).unwrap().value);
        }
    }

    #[test]
    fn derivation_dim_is_basis_free(k in 0usize..11, seed in any::<u64>()) {
        let f = Family::ALL[k];
        let l = f.has_lambda().then(|| Rational::new(2, 3));
        let t = get_family(f, l).unwrap().table;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = t.change_basis(&random_invertible(&mut rng, 3)).unwrap();
        let ctx = PivotContext::strict(vec![]);
        prop_assert!(c.check_leibniz().holds);
        prop_assert_eq!(c.derivation_dim(&ctx).unwrap(), t.derivation_dim(&ctx).unwrap());
        prop_assert_eq!(c.right_annihilator(&ctx).unwrap().dim(), t.right_annihilator(&ctx).unwrap().dim());
    }

    #[test]
    fn trivial_partition_is_identity(f in coord_poly()) {
        prop_assert_eq!(pi_substitution(&f, &[1, 1]).unwrap(), f);
    }

    #[test]
    fn poly_json_round_trip(a in poly()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Poly>(&s).unwrap(), a);
    }
}

#[test]
fn trace_words_round_trip_text() {
    for w in leibniz3::trace::enumerate_trace_words(3, 2) {
        assert_eq!(w.to_string().parse::<TraceWord>().unwrap(), w);
    }
}
