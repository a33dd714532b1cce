use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use thickres::blowup::{BlowupTree, Center, CenterSelector};
use thickres::chart::{Atlas, Chart};
use thickres::divisors::OrderedBoundary;
use thickres::ring::{rat, Monomial, Poly, QuotientRing, RationalFunction, RingElem};

const VARS: [&str; 3] = ["eps", "x", "y"];

fn poly_strategy(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (-4i64..=4, prop::array::uniform3(0..=max_exp)),
        0..=max_terms,
    )
    .prop_map(|terms| {
        let mut p = Poly::zero();
        for (c, e) in terms {
            if c != 0 {
                p.add_term(
                    Monomial::from_exponents(VARS.iter().copied().zip(e)),
                    rat(c, 1),
                );
            }
        }
        p
    })
}

fn ring(h: u32) -> Arc<QuotientRing> {
    QuotientRing::ptm(VARS, "eps", h).unwrap()
}

fn elem(h: u32, p: &Poly) -> RingElem {
    ring(h).elem(p).unwrap()
}

proptest! {
    #[test]
    fn normal_form_is_a_homomorphism(h in 1u32..=4, p in poly_strategy(4, 4), q in poly_strategy(4, 4)) {
        let r = ring(h);
        prop_assert_eq!(r.elem(&(&p + &q)).unwrap(), &elem(h, &p) + &elem(h, &q));
        prop_assert_eq!(r.elem(&(&p * &q)).unwrap(), &elem(h, &p) * &elem(h, &q));
    }

    #[test]
    fn units_invert(h in 1u32..=4, c in 1i64..=5, tail in poly_strategy(3, 3)) {
        let u = &Poly::constant(rat(c, 1)) + &tail.mul_monomial(&Monomial::var("eps"));
        let u = elem(h, &u);
        prop_assert!(u.is_unit());
        let inv = u.inverse().unwrap();
        prop_assert_eq!(&u * &inv, ring(h).one());
    }

    #[test]
    fn non_units_are_rejected(h in 1u32..=4, p in poly_strategy(3, 3)) {
        let f = elem(h, &p.mul_monomial(&Monomial::var("x")));
        prop_assert!(!f.is_unit());
        prop_assert!(f.inverse().is_err());
    }

    #[test]
    fn unit_monomial_decomposition_recovers_the_monomial(
        h in 2u32..=4,
        a in 0u32..=3,
        b in 0u32..=3,
        c in 1i64..=5,
        tail in poly_strategy(3, 2),
    ) {
        let m = Monomial::from_exponents([("x", a), ("y", b)]);
        let u = &Poly::constant(rat(c, 1)) + &tail.mul_monomial(&Monomial::var("eps"));
        let f = elem(h, &u.mul_monomial(&m));
        let (unit, got) = f.unit_monomial_decompose().unwrap();
        prop_assert_eq!(&got, &m);
        prop_assert!(unit.is_unit());
        prop_assert_eq!(unit.mul_monomial(&got), f);
    }

    #[test]
    fn blowup_maps_are_multiplicative(h in 2u32..=4, p in poly_strategy(3, 3), q in poly_strategy(3, 3)) {
        let c = Chart::ptm("root", VARS, "eps", h).unwrap();
        let s: BTreeSet<String> = ["x", "y"].iter().map(|v| v.to_string()).collect();
        let step = thickres::blowup::blowup_regular(&c, &s).unwrap();
        let (f, g) = (elem(h, &p), elem(h, &q));
        for child in &step.children {
            let m = &child.map;
            prop_assert_eq!(m.apply(&(&f * &g)).unwrap(), &m.apply(&f).unwrap() * &m.apply(&g).unwrap());
            prop_assert_eq!(m.apply(&(&f + &g)).unwrap(), &m.apply(&f).unwrap() + &m.apply(&g).unwrap());
        }
    }

    #[test]
    fn valuation_is_additive(
        p in poly_strategy(3, 3),
        q in poly_strategy(3, 3),
        d1 in 0u32..=4,
        d2 in 0u32..=4,
    ) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let a = RationalFunction::new(p, Poly::monomial(Monomial::power("x", d1))).unwrap();
        let b = RationalFunction::new(q, Poly::monomial(Monomial::power("x", d2))).unwrap();
        prop_assert_eq!(
            a.mul(&b).valuation("x").unwrap(),
            a.valuation("x").unwrap() + b.valuation("x").unwrap()
        );
    }

    #[test]
    fn polynomial_strings_round_trip(p in poly_strategy(5, 4)) {
        let back: Poly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    /// Any sequence of regular and reduced-divisor blowups keeps every chart
    /// of the form `k[...]/(eps^h)`.
    #[test]
    fn blowup_trees_stay_ptm(h in 2u32..=4, choices in prop::collection::vec((0usize..4, 0usize..3), 1..6)) {
        let c = Chart::ptm("root", VARS, "eps", h)
            .unwrap()
            .with_boundary(OrderedBoundary::from_pairs([(1, "x"), (2, "y")]).unwrap())
            .unwrap();
        let mut tree = BlowupTree::from_chart(c);
        for (leaf_pick, kind) in choices {
            let leaves = tree.leaves().to_vec();
            let leaf = &leaves[leaf_pick % leaves.len()];
            let chart = tree.chart(leaf).unwrap().clone();
            let t: Vec<String> = chart.t_vars().map(str::to_string).collect();
            let center = match kind {
                0 => Center::regular(t.iter().take(2).cloned()),
                1 => Center::regular([t[0].clone()]),
                _ => Center::divisor(Monomial::var(&t[t.len() - 1])),
            };
            tree.apply(leaf, &center).unwrap();
        }
        for chart in tree.charts() {
            let (eps, n) = chart.ring().ptm_parameter().unwrap();
            prop_assert_eq!(eps, chart.eps());
            prop_assert_eq!(n, h);
            prop_assert_eq!(chart.thickness(), h);
        }
    }
}

/// A global center blown up on a two-chart atlas where it only meets one
/// chart: the other chart is untouched and counted as skipped, and the
/// result matches blowing up that chart alone.
#[test]
fn skipped_blowups_are_equivariant() {
    let a = Chart::ptm("A", ["x", "y", "eps"], "eps", 2).unwrap();
    let b = Chart::ptm("B", ["u", "eps"], "eps", 2).unwrap();
    let atlas = Atlas {
        charts: vec![a.clone(), b.clone()],
        maps: Vec::new(),
        base_exponent: 2,
    };
    let mut both = BlowupTree::from_atlas(&atlas).unwrap();
    both.run_sequence(&[CenterSelector::everywhere(Center::regular(["x", "y"]))])
        .unwrap();
    assert_eq!(both.skipped(), 1);
    assert!(both.is_leaf("B"));
    assert_eq!(both.chart("B").unwrap(), &b);

    let mut alone = BlowupTree::from_chart(a);
    alone
        .run_sequence(&[CenterSelector::everywhere(Center::regular(["x", "y"]))])
        .unwrap();
    let from_both: Vec<&Chart> = both.leaf_charts().filter(|c| c.id != "B").collect();
    let from_alone: Vec<&Chart> = alone.leaf_charts().collect();
    assert_eq!(from_both, from_alone);
    assert_eq!(both.center_sequence(), alone.center_sequence());
}
