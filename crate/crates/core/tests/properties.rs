use num_traits::{One, Zero};
use proptest::prelude::*;

use cuntz::axioms::{check_axiom, replay, Axiom, Fragment, Verdict};
use cuntz::catalog::{make_dimension_drop, make_zstable_model, nbar, softened};
use cuntz::concrete::{
    pl_cuntz_leq, pl_dtau, pl_integral, pl_layer_cake, pl_way_below, rordam_witness,
    spectral_class, spectral_dtau, PLFunction, RationalMeasure, SpectralElement,
};
use cuntz::constructions::{
    cu_product, ideal_generated, quotient, ultraproduct, CuProduct, Quotient, Ultrafilter,
};
use cuntz::functionals::{alpha, rank_of, RankFunction};
use cuntz::scalar::rat;
use cuntz::{Descriptor, Elem, Ext, Grid, Rational, Semigroup};

fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn zstable() -> Semigroup {
    make_zstable_model(1, 2, vec![vec![q(1, 1), q(1, 1)]]).unwrap()
}

/// Small grids of several kinds.
fn kinds() -> &'static [(Semigroup, Vec<Elem>)] {
    static KINDS: std::sync::OnceLock<Vec<(Semigroup, Vec<Elem>)>> = std::sync::OnceLock::new();
    KINDS.get_or_init(build_kinds)
}

fn build_kinds() -> Vec<(Semigroup, Vec<Elem>)> {
    let mut out = Vec::new();
    for s in [
        softened(1),
        softened(2),
        nbar(),
        zstable(),
        cu_product(vec![nbar(), softened(1)]),
    ] {
        let g = s.grid(&Grid::new(3, 4));
        out.push((s, g));
    }
    let d = make_dimension_drop();
    let g: Vec<Elem> = d.grid(&Grid::new(1, 2)).into_iter().take(60).collect();
    out.push((d, g));
    out
}

fn pick(xs: &[Elem], i: usize) -> &Elem {
    &xs[i % xs.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn way_below_sits_between_leq_and_compact_leq(k in 0usize..6, i in 0usize..1000, j in 0usize..1000) {
        let ks = kinds();
        let (s, xs) = &ks[k];
        let (a, b) = (pick(xs, i), pick(xs, j));
        if s.way_below(a, b).unwrap() {
            prop_assert!(s.leq(a, b).unwrap());
        }
        if s.leq(a, b).unwrap() && s.is_compact(b).unwrap() {
            prop_assert!(s.way_below(a, b).unwrap());
        }
    }

    #[test]
    fn way_below_is_additive(k in 0usize..6, i in 0usize..1000, j in 0usize..1000, u in 0usize..1000, v in 0usize..1000) {
        let ks = kinds();
        let (s, xs) = &ks[k];
        let (a, b, a2, b2) = (pick(xs, i), pick(xs, j), pick(xs, u), pick(xs, v));
        if s.way_below(a, b).unwrap() && s.way_below(a2, b2).unwrap() {
            prop_assert!(s.way_below(&s.add(a, a2).unwrap(), &s.add(b, b2).unwrap()).unwrap());
        }
    }

    #[test]
    fn outputs_are_canonical(k in 0usize..6, i in 0usize..1000, j in 0usize..1000) {
        let ks = kinds();
        let (s, xs) = &ks[k];
        let (a, b) = (pick(xs, i), pick(xs, j));
        let sum = s.add(a, b).unwrap();
        prop_assert_eq!(s.element(sum.value().clone()).unwrap(), sum.clone());
        prop_assert_eq!(s.parse(&s.render(&sum)).unwrap(), sum);
        if let Some(w) = s.wedge(a, b).unwrap() {
            prop_assert_eq!(s.element(w.value().clone()).unwrap(), w);
        }
        let d = s.approximants(a).unwrap();
        let sup = s.sup(&d).unwrap();
        prop_assert_eq!(s.element(sup.value().clone()).unwrap(), sup);
    }

    #[test]
    fn sup_of_affine_sums_is_additive(k in 0usize..3, i in 0usize..1000, j in 0usize..1000, u in 0usize..1000, v in 0usize..1000) {
        let ks = kinds();
        let (s, xs) = &ks[[0, 2, 4][k]];
        let (b1, t1, b2, t2) = (pick(xs, i), pick(xs, j), pick(xs, u), pick(xs, v));
        let d1 = Descriptor::affine(vec![], b1.clone(), t1.clone());
        let d2 = Descriptor::affine(vec![], b2.clone(), t2.clone());
        let d = Descriptor::affine(vec![], s.add(b1, b2).unwrap(), s.add(t1, t2).unwrap());
        prop_assert_eq!(s.add(&s.sup(&d1).unwrap(), &s.sup(&d2).unwrap()).unwrap(), s.sup(&d).unwrap());
    }

    #[test]
    fn wedge_distributes_over_addition(k in 0usize..2, i in 0usize..1000, j in 0usize..1000, c in 0usize..1000) {
        let ks = kinds();
        let (s, xs) = &ks[[0, 3][k]];
        let (a, b, c) = (pick(xs, i), pick(xs, j), pick(xs, c));
        if let Some(w) = s.wedge(a, b).unwrap() {
            let lhs = s.wedge(&s.add(a, c).unwrap(), &s.add(b, c).unwrap()).unwrap();
            prop_assert_eq!(lhs, Some(s.add(&w, c).unwrap()));
        }
    }
}

#[test]
fn o6_plus_passing_rules_out_o6_failing() {
    let models = [
        softened(1),
        softened(2),
        nbar(),
        zstable(),
        cuntz::axioms::glued_chain3(),
        make_dimension_drop(),
    ];
    for s in &models {
        let frag = Fragment::default_for(s);
        let plus = check_axiom(s, Axiom::O6Plus, &frag).unwrap();
        if plus.verdict == Verdict::Pass {
            assert_ne!(
                check_axiom(s, Axiom::O6, &frag).unwrap().verdict,
                Verdict::Fail,
                "{}",
                s.label()
            );
        }
    }
}

#[test]
fn dimension_drop_constants_are_integers() {
    let d = make_dimension_drop::<i128>();
    assert!(d.parse("c:1/2").is_err());
    assert!(d.parse("c:1/3").is_err());
    assert!(d.parse("c:2").is_ok());
}

fn subset(xs: &[Elem], mask: u32) -> Vec<Elem> {
    xs.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, x)| x.clone())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn verdict_relations_on_small_fragments(k in 0usize..2, mask in 1u32..1 << 8) {
        let s = [softened(1), cuntz::axioms::glued_chain3()][k].clone();
        let pool: Vec<Elem> = Fragment::default_for(&s).elements.into_iter().take(8).collect();
        let frag = Fragment::of(&s, subset(&pool, mask)).unwrap();
        let plus = check_axiom(&s, Axiom::O6Plus, &frag).unwrap();
        let o6 = check_axiom(&s, Axiom::O6, &frag).unwrap();
        for r in [&plus, &o6] {
            if r.verdict == Verdict::Fail {
                prop_assert!(replay(&s, &frag, r).unwrap());
            }
        }
        let wc = check_axiom(&s, Axiom::WC, &frag).unwrap();
        if wc.verdict == Verdict::Pass {
            for x in &frag.elements {
                for y in &frag.elements {
                    for e in frag.elements.iter().filter(|e| s.is_compact(e).unwrap()) {
                        if s.add(x, e).unwrap() == s.add(y, e).unwrap() {
                            prop_assert_eq!(x, y);
                        }
                    }
                }
            }
        } else if wc.verdict == Verdict::Fail {
            prop_assert!(replay(&s, &frag, &wc).unwrap());
        }
    }

    #[test]
    fn riesz_never_fails_where_wedges_exist(mask in 1u32..1 << 8) {
        let s = softened(1);
        let pool: Vec<Elem> = s.grid(&Grid::new(2, 2)).into_iter().take(8).collect();
        let frag = Fragment::of(&s, subset(&pool, mask)).unwrap();
        prop_assert_eq!(check_axiom(&s, Axiom::Riesz, &frag).unwrap().verdict, Verdict::Pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_map_preserves_structure(a0 in 0i64..6, a1 in 0i64..6, b0 in 0i64..6, b1 in 0i64..6) {
        let p = cu_product(vec![nbar(), nbar()]);
        let ideal = ideal_generated(&p, &p.parse("(1, 0)").unwrap()).unwrap();
        let qs = quotient(&p, &ideal).unwrap();
        let k = qs.kind::<Quotient<i128>>().unwrap();
        let pi = |x: &Elem| qs.element(k.class_of(x).unwrap()).unwrap();
        let a = p.parse(&format!("({a0}, {a1})")).unwrap();
        let b = p.parse(&format!("({b0}, {b1})")).unwrap();
        prop_assert_eq!(pi(&p.add(&a, &b).unwrap()), qs.add(&pi(&a), &pi(&b)).unwrap());
        if p.leq(&a, &b).unwrap() {
            prop_assert!(qs.leq(&pi(&a), &pi(&b)).unwrap());
        }
        if p.way_below(&a, &b).unwrap() {
            prop_assert!(qs.way_below(&pi(&a), &pi(&b)).unwrap());
        }
    }

    #[test]
    fn principal_ultraproduct_is_a_projection(n in 2usize..4, j0 in 0usize..4, xs in proptest::collection::vec(0i64..5, 3), ys in proptest::collection::vec(0i64..5, 3)) {
        let j0 = j0 % n;
        let u = Ultrafilter::principal(n, j0).unwrap();
        let up = ultraproduct(vec![nbar(); n], &u).unwrap();
        let k = up.kind::<Quotient<i128>>().unwrap();
        let p = &k.base;
        prop_assert!(p.kind::<CuProduct<i128>>().is_some());
        let tuple = |v: &[i64]| p.parse(&format!("({})", v[..n].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).unwrap();
        let (a, b) = (tuple(&xs), tuple(&ys));
        let (ca, cb) = (up.element(k.class_of(&a).unwrap()).unwrap(), up.element(k.class_of(&b).unwrap()).unwrap());
        prop_assert_eq!(up.leq(&ca, &cb).unwrap(), xs[j0] <= ys[j0]);
        prop_assert_eq!(ca == cb, xs[j0] == ys[j0]);
    }

    #[test]
    fn ranks_are_additive_and_alpha_is_monotone(k in 0u64..2, a in 0i64..40, b in 0i64..40, d in 1i64..9) {
        let s = softened(k + 1);
        let x = s.parse(&format!("s:{}", cuntz::scalar::fmt_rational(&q(a + 1, d)))).unwrap();
        let y = s.parse(&format!("c:{}", b)).unwrap();
        let sum = rank_of(&s, &s.add(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(sum, rank_of(&s, &x).unwrap() + rank_of(&s, &y).unwrap());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let f = |t: i64| alpha(&s, &RankFunction::Linear(Ext::Finite(q(t, d)))).unwrap();
        prop_assert!(s.leq(&f(lo), &f(hi)).unwrap());
    }
}

fn pl_strategy(den: i64) -> impl Strategy<Value = PLFunction<i128>> {
    proptest::collection::vec((any::<bool>(), 0i64..4), (den - 1) as usize).prop_map(move |pts| {
        let mut bp = vec![Rational::zero()];
        let mut vals = vec![Rational::zero()];
        for (i, (keep, v)) in pts.into_iter().enumerate() {
            if keep {
                bp.push(q(i as i64 + 1, den));
                vals.push(q(v, 3));
            }
        }
        bp.push(Rational::one());
        vals.push(Rational::zero());
        PLFunction::new(bp, vals).unwrap()
    })
}

fn spectral_strategy() -> impl Strategy<Value = SpectralElement<i128>> {
    proptest::collection::vec(0i64..4, 1..6)
        .prop_map(|v| SpectralElement::new(v.into_iter().map(|x| q(x, 2)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functional_calculus_stays_below(f in pl_strategy(6), hv in proptest::collection::vec(0i64..3, 3)) {
        let f = PLFunction::new(f.breakpoints().to_vec(), f.values().iter().map(|v| v / q(1, 1).max(f.max().max(q(1, 1)))).collect()).unwrap();
        let h = PLFunction::new(vec![q(0, 1), q(1, 3), q(2, 3), q(1, 1)], std::iter::once(q(0, 1)).chain(hv.iter().map(|v| q(*v, 2))).collect()).unwrap();
        let hf = f.compose(&h).unwrap();
        prop_assert!(pl_cuntz_leq(&hf, &f));
        if hv.iter().all(|v| *v > 0) {
            prop_assert!(pl_cuntz_leq(&f, &hf));
        }
    }

    #[test]
    fn orthogonal_sums_add(a in spectral_strategy(), b in spectral_strategy()) {
        let n = nbar();
        let ab = a.direct_sum(&b);
        prop_assert_eq!(spectral_class(&ab, &n).unwrap(), n.add(&spectral_class(&a, &n).unwrap(), &spectral_class(&b, &n).unwrap()).unwrap());
        prop_assert_eq!(spectral_dtau(&ab), q((a.rank() + b.rank()) as i64, (a.dim() + b.dim()) as i64));
    }

    #[test]
    fn rordam_delta_works(f in pl_strategy(6), g in pl_strategy(6), e in 1i64..6) {
        let g = g.add(&f);
        let eps = q(e, 6);
        let delta = rordam_witness(&f, &g, &eps).unwrap();
        if eps < f.max() {
            prop_assert!(pl_way_below(&f.cutdown(&eps).unwrap(), &g.cutdown(&delta).unwrap()));
        }
    }

    #[test]
    fn way_below_means_below_a_cutdown(f in pl_strategy(4), g in pl_strategy(4)) {
        let found = (1..=24).any(|k| pl_cuntz_leq(&f, &g.cutdown(&rat(1, 1 << k)).unwrap()));
        prop_assert_eq!(pl_way_below(&f, &g), found);
    }

    #[test]
    fn layer_cake_and_disjoint_additivity(f in pl_strategy(6), g in pl_strategy(6), w in 0i64..4, p in 0i64..7, m in 0i64..3) {
        let mu = RationalMeasure::new(q(w, 2), vec![(q(p, 6), q(m, 1))]).unwrap();
        prop_assert_eq!(pl_layer_cake(&f, &mu), pl_integral(&f, &mu));
        // f squeezed into [0, 1/2] and g into [1/2, 1] have disjoint supports.
        let squeeze = |h: &PLFunction<i128>, shift: Rational| {
            let mut bp: Vec<Rational> = h.breakpoints().iter().map(|x| (x + shift) / q(2, 1)).collect();
            let mut vals = h.values().to_vec();
            if shift.is_zero() {
                bp.push(Rational::one());
                vals.push(Rational::zero());
            } else {
                bp.insert(0, Rational::zero());
                vals.insert(0, Rational::zero());
            }
            PLFunction::new(bp, vals).unwrap()
        };
        let (l, r) = (squeeze(&f, Rational::zero()), squeeze(&g, Rational::one()));
        prop_assert_eq!(pl_dtau(&l.add(&r), &mu), pl_dtau(&l, &mu) + pl_dtau(&r, &mu));
    }
}
