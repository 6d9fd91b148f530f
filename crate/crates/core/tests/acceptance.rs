//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cuntz::axioms::{
    check_almost_unperforation, check_axiom, glued_chain3, replay, Axiom, Fragment, Verdict,
};
use cuntz::catalog::{
    gap_model, make_catalog, make_dimension_drop, make_finite_table, make_zstable_model, nbar,
    softened, CatalogKind, FiniteTable,
};
use cuntz::concrete::{
    cuntz_leq, interval_handle, layer_cake_trace, pl_dtau, pl_layer_cake, spectral_dtau,
    to_cuntz_class, ConcreteElement, PLFunction, RationalMeasure, SpectralElement,
};
use cuntz::constructions::{
    cu_product, direct_limit, gamma_completion, grothendieck_interpolation, ideal_generated,
    in_bounded_scale, is_interpolation_gap, quotient, seq_product_nbar, tau_completion,
    ultraproduct, AuxRel, CuProduct, GrothendieckGroup, GroupBox, Morphism, MorphismAction,
    Quotient, SeqFn, Ultrafilter, WSemigroup,
};
use cuntz::functionals::{alpha, detect_elementary, evaluate, rank_of, Functional, RankFunction};
use cuntz::scalar::rat;
use cuntz::{Elem, Ext, Grid, Rational, Semigroup, Value};

const AXIOM_BUDGET: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

/// Checks that `phi` is injective, additive, and preserves and reflects `≤` and `≪` on `xs`.
fn isomorphic_on(
    s: &Semigroup,
    t: &Semigroup,
    xs: &[Elem],
    phi: impl Fn(&Elem) -> Elem,
) -> Result<(), String> {
    let img: Vec<Elem> = xs.iter().map(&phi).collect();
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in xs.iter().enumerate() {
            let (fa, fb) = (&img[i], &img[j]);
            let show = || format!("{} vs {}", s.render(a), s.render(b));
            ensure((a == b) == (fa == fb), || {
                format!("not injective at {}", show())
            })?;
            ensure(s.leq(a, b).unwrap() == t.leq(fa, fb).unwrap(), || {
                format!("≤ differs at {}", show())
            })?;
            ensure(
                s.way_below(a, b).unwrap() == t.way_below(fa, fb).unwrap(),
                || format!("≪ differs at {}", show()),
            )?;
            ensure(phi(&s.add(a, b).unwrap()) == t.add(fa, fb).unwrap(), || {
                format!("+ differs at {}", show())
            })?;
        }
    }
    Ok(())
}

/// `c:x ↦ const(x)`, `s:x ↦ lim(x)` into a completion of scalars.
fn softened_to_completion(s: &Semigroup, g: &Semigroup) -> impl Fn(&Elem) -> Elem {
    let (s, g) = (s.clone(), g.clone());
    move |x| {
        let r = s.render(x);
        let text = match r.split_once(':') {
            Some(("c", v)) => format!("const({v})"),
            Some(("s", v)) => format!("lim({v})"),
            _ => panic!("unexpected element {r}"),
        };
        g.parse(&text).unwrap()
    }
}

fn completion_to_softened(g: &Semigroup, s: &Semigroup) -> impl Fn(&Elem) -> Elem {
    let (g, s) = (g.clone(), s.clone());
    move |y| {
        let r = g.render(y);
        let inner = |p: &str| {
            r.strip_prefix(p)
                .and_then(|x| x.strip_suffix(')'))
                .map(str::to_string)
        };
        let text = match (inner("const("), inner("lim(")) {
            (Some(v), _) => format!("c:{v}"),
            (_, Some(v)) => format!("s:{v}"),
            _ => panic!("unexpected class {r}"),
        };
        s.parse(&text).unwrap()
    }
}

fn criterion_1() -> Outcome {
    let g =
        gamma_completion(WSemigroup::scalars(2, false, AuxRel::Leq).map_err(|e| e.to_string())?);
    let s = softened(2);
    let xs = s.grid(&Grid::compact_dens(8, 16));
    let phi = softened_to_completion(&s, &g);
    let psi = completion_to_softened(&g, &s);
    for x in &xs {
        ensure(psi(&phi(x)) == *x, || format!("ψφ ≠ id at {}", s.render(x)))?;
    }
    let ys = g.grid(&Grid::compact_dens(8, 16));
    for y in &ys {
        ensure(phi(&psi(y)) == *y, || format!("φψ ≠ id at {}", g.render(y)))?;
    }
    isomorphic_on(&s, &g, &xs, &phi)?;
    Ok(format!(
        "{} elements, {} pairs",
        xs.len(),
        xs.len() * xs.len()
    ))
}

/// `s_x ≤ c_n ⇔ x ≤ n`, `c_n ≤ s_x ⇔ n < x`, `c_n + s_x = s_{n+x}`, through `phi`.
fn mixed_laws(s: &Semigroup, t: &Semigroup, phi: &dyn Fn(&Elem) -> Elem) -> Result<usize, String> {
    let mut checked = 0;
    for n in 0..=6 {
        for d in 1..=12 {
            for k in 1..=6 * d {
                let x = q(k, d);
                let c = phi(&s.parse(&format!("c:{n}")).unwrap());
                let sx = phi(&s
                    .parse(&format!("s:{}", cuntz::scalar::fmt_rational(&x)))
                    .unwrap());
                let sum = phi(&s
                    .parse(&format!(
                        "s:{}",
                        cuntz::scalar::fmt_rational(&(x + q(n, 1)))
                    ))
                    .unwrap());
                ensure(t.leq(&sx, &c).unwrap() == (x <= q(n, 1)), || {
                    format!("s_x ≤ c_n law at x={x}, n={n}")
                })?;
                ensure(t.leq(&c, &sx).unwrap() == (q(n, 1) < x), || {
                    format!("c_n ≤ s_x law at x={x}, n={n}")
                })?;
                ensure(t.add(&c, &sx).unwrap() == sum, || {
                    format!("c_n + s_x law at x={x}, n={n}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn criterion_2() -> Outcome {
    let n = nbar();
    let dbl =
        Morphism::new(n.clone(), n.clone(), MorphismAction::Scale(2)).map_err(|e| e.to_string())?;
    let l = direct_limit(&[n], &[dbl]).map_err(|e| e.to_string())?;
    let s2 = softened(2);
    let xs = s2.grid(&Grid::compact_dens(4, 8));
    isomorphic_on(&s2, &l, &xs, softened_to_completion(&s2, &l))?;

    let d = make_dimension_drop();
    let int = Morphism::new(d.clone(), d.clone(), MorphismAction::Integration)
        .map_err(|e| e.to_string())?;
    let z = direct_limit(&[d], &[int]).map_err(|e| e.to_string())?;
    let s1 = softened(1);
    let phi = {
        let (s1, z) = (s1.clone(), z.clone());
        move |x: &Elem| z.parse(&format!("const({})", s1.render(x))).unwrap()
    };
    let frag = s1.grid(&Grid::new(6, 12));
    isomorphic_on(&s1, &z, &frag, &phi)?;
    let laws = mixed_laws(&s1, &z, &phi)?;
    mixed_laws(&s1, &s1, &|x: &Elem| x.clone())?;
    Ok(format!(
        "{} dyadic pairs, {} Cu(Z) pairs, {} mixed-law instances",
        xs.len().pow(2),
        frag.len().pow(2),
        laws
    ))
}

/// `[0,∞) ⊔ (0,∞]` written out by hand.
#[derive(Clone, Debug)]
enum Split {
    C(Rational),
    S(Ext),
}

impl Split {
    fn leq(&self, o: &Split) -> bool {
        match (self, o) {
            (Split::C(a), Split::C(b)) => a <= b,
            (Split::C(a), Split::S(b)) => Ext::Finite(*a) < *b,
            (Split::S(a), Split::C(b)) => *a <= Ext::Finite(*b),
            (Split::S(a), Split::S(b)) => a <= b,
        }
    }

    fn way_below(&self, o: &Split) -> bool {
        match (self, o) {
            (Split::C(_), _) => self.leq(o),
            (Split::S(a), Split::C(b)) => *a <= Ext::Finite(*b),
            (Split::S(a), Split::S(b)) => a < b,
        }
    }

    fn add(&self, o: &Split) -> Split {
        match (self, o) {
            (Split::C(a), Split::C(b)) => Split::C(a + b),
            (Split::C(a), Split::S(b)) | (Split::S(b), Split::C(a)) => {
                Split::S(b.clone() + Ext::Finite(*a))
            }
            (Split::S(a), Split::S(b)) => Split::S(a.clone() + b.clone()),
        }
    }

    fn text(&self) -> String {
        match self {
            Split::C(a) => format!("const({})", cuntz::scalar::fmt_rational(a)),
            Split::S(a) => format!("lim({a})"),
        }
    }
}

fn criterion_3() -> Outcome {
    let t =
        tau_completion(WSemigroup::scalars(0, true, AuxRel::FiniteLeq).map_err(|e| e.to_string())?);
    let mut vals: Vec<Rational> = (1..=12)
        .flat_map(|d| (0..=2 * d).map(move |k| q(k, d)))
        .collect();
    vals.sort();
    vals.dedup();
    let mut samples: Vec<Split> = vals.iter().map(|v| Split::C(*v)).collect();
    samples.extend(
        vals.iter()
            .filter(|v| !v.is_zero())
            .map(|v| Split::S(Ext::Finite(*v))),
    );
    samples.push(Split::S(Ext::Infinite));
    let elems: Vec<Elem> = samples
        .iter()
        .map(|x| t.parse(&x.text()).unwrap())
        .collect();
    for (x, e) in samples.iter().zip(&elems) {
        let compact = matches!(x, Split::C(_));
        ensure(t.is_compact(e).unwrap() == compact, || {
            format!("compactness of {}", x.text())
        })?;
    }
    for (x, a) in samples.iter().zip(&elems) {
        for (y, b) in samples.iter().zip(&elems) {
            let at = || format!("{} vs {}", x.text(), y.text());
            ensure(t.leq(a, b).unwrap() == x.leq(y), || {
                format!("≤ at {}", at())
            })?;
            ensure(t.way_below(a, b).unwrap() == x.way_below(y), || {
                format!("≪ at {}", at())
            })?;
            ensure(
                t.add(a, b).unwrap() == t.parse(&x.add(y).text()).unwrap(),
                || format!("+ at {}", at()),
            )?;
        }
    }
    Ok(format!("{} samples", samples.len()))
}

fn criterion_4() -> Outcome {
    let suite = [
        Axiom::O1,
        Axiom::O2,
        Axiom::O3,
        Axiom::O4,
        Axiom::O5,
        Axiom::O6,
        Axiom::Riesz,
    ];
    let z = make_zstable_model(1, 2, vec![vec![q(1, 1), q(1, 1)]]).map_err(|e| e.to_string())?;
    let kinds = [softened(1), softened(2), nbar(), make_dimension_drop(), z];
    let mut slowest = Duration::ZERO;
    let mut timed =
        |label: String, f: &mut dyn FnMut() -> Result<(), String>| -> Result<(), String> {
            let start = Instant::now();
            f()?;
            let el = start.elapsed();
            slowest = slowest.max(el);
            ensure(el < AXIOM_BUDGET, || format!("{label} took {el:?}"))
        };
    for s in &kinds {
        let frag = Fragment::default_for(s);
        for ax in suite {
            timed(format!("{} {}", s.label(), ax.name()), &mut || {
                let r = check_axiom(s, ax, &frag).map_err(|e| e.to_string())?;
                ensure(r.verdict == Verdict::Pass, || {
                    format!(
                        "{} {}: {:?} {:?}",
                        s.label(),
                        ax.name(),
                        r.verdict,
                        r.rendered(s)
                    )
                })
            })?;
        }
    }
    let zi = make_finite_table::<i128>(FiniteTable::zero_infinity()).map_err(|e| e.to_string())?;
    timed("{0,inf} WC".into(), &mut || {
        let f = Fragment::default_for(&zi);
        let r = check_axiom(&zi, Axiom::WC, &f).map_err(|e| e.to_string())?;
        let w: Vec<String> = r.rendered(&zi).into_iter().map(|(_, v)| v).collect();
        ensure(
            r.verdict == Verdict::Fail && w == ["inf", "0", "inf"],
            || format!("WC witness {w:?}"),
        )?;
        ensure(replay(&zi, &f, &r).unwrap(), || {
            "WC witness does not replay".into()
        })
    })?;
    let gap = gap_model::<i128>();
    timed("gap almost unperforation".into(), &mut || {
        let f = Fragment::parse(&gap, &["(1,1)", "(2,0)"]).map_err(|e| e.to_string())?;
        let r = check_almost_unperforation(&gap, &f, 12).map_err(|e| e.to_string())?;
        let w: Vec<String> = r
            .rendered(&gap)
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        ensure(
            r.verdict == Verdict::Fail && r.multiplier == Some(3) && w == ["s=(1,1)", "t=(2,0)"],
            || format!("almost unperforation witness {:?} {w:?}", r.multiplier),
        )?;
        ensure(replay(&gap, &f, &r).unwrap(), || {
            "gap witness does not replay".into()
        })
    })?;
    let glued = glued_chain3::<i128>();
    timed("glued O6+".into(), &mut || {
        let f = Fragment::default_for(&glued);
        let r = check_axiom(&glued, Axiom::O6Plus, &f).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Fail, || {
            format!("glued O6+ verdict {:?}", r.verdict)
        })?;
        ensure(replay(&glued, &f, &r).unwrap(), || {
            "glued O6+ witness does not replay".into()
        })
    })?;
    Ok(format!("slowest check {:.2}s", slowest.as_secs_f64()))
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..=max * d), d)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = nbar();
    for _ in 0..100 {
        let dim = rng.gen_range(1..=6usize);
        let eig: Vec<Rational> = (0..dim)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Rational::zero()
                } else {
                    random_rational(&mut rng, 3, 20)
                }
            })
            .collect();
        let a = SpectralElement::new(eig.clone()).map_err(|e| e.to_string())?;
        let tr = eig.iter().fold(Rational::zero(), |acc, x| acc + x) / q(dim as i64, 1);
        let lam = Functional::scaling(&n, Ext::Finite(q(1, dim as i64)));
        let lc = layer_cake_trace(&a, &lam).map_err(|e| e.to_string())?;
        ensure(lc == tr, || format!("layer cake {lc} ≠ trace {tr} for {a}"))?;
        let rank = eig.iter().filter(|x| !x.is_zero()).count() as i64;
        ensure(spectral_dtau(&a) == q(rank, dim as i64), || {
            format!("d_τ of {a}")
        })?;
    }
    let fixture = SpectralElement::new(vec![q(1, 2), q(1, 3), q(0, 1)]).unwrap();
    let lam = Functional::scaling(&n, Ext::Finite(q(1, 3)));
    ensure(
        layer_cake_trace(&fixture, &lam).unwrap() == q(5, 18),
        || "fixture layer cake".into(),
    )?;
    ensure(spectral_dtau(&fixture) == q(2, 3), || "fixture d_τ".into())?;
    Ok("100 random spectra plus fixture".into())
}

fn random_pl(rng: &mut ChaCha8Rng, den: i64) -> PLFunction<i128> {
    let mut bp: Vec<Rational> = (1..den)
        .filter(|_| rng.gen_bool(0.4))
        .map(|k| q(k, den))
        .collect();
    bp.insert(0, Rational::zero());
    bp.push(Rational::one());
    let vals = bp
        .iter()
        .map(|_| {
            if rng.gen_bool(0.45) {
                Rational::zero()
            } else {
                random_rational(rng, 3, 6)
            }
        })
        .collect();
    PLFunction::new(bp, vals).unwrap()
}

/// Linear interpolation, independent of the library.
fn eval_pl(f: &PLFunction<i128>, x: &Rational) -> Rational {
    let (b, v) = (f.breakpoints(), f.values());
    for i in 0..b.len() - 1 {
        if *x >= b[i] && *x <= b[i + 1] {
            return v[i] + (v[i + 1] - v[i]) * ((x - b[i]) / (b[i + 1] - b[i]));
        }
    }
    unreachable!()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let f = random_pl(&mut rng, 12);
        let w = random_rational(&mut rng, 2, 5);
        let atoms: Vec<(Rational, Rational)> = (0..rng.gen_range(0..=3))
            .map(|_| {
                (
                    q(rng.gen_range(0..=12), 12),
                    random_rational(&mut rng, 2, 5),
                )
            })
            .collect();
        let mu = RationalMeasure::new(w, atoms.clone()).map_err(|e| e.to_string())?;
        let (b, v) = (f.breakpoints(), f.values());
        let mut direct = Rational::zero();
        let mut supp_len = Rational::zero();
        for i in 0..b.len() - 1 {
            let width = b[i + 1] - b[i];
            direct += (v[i] + v[i + 1]) / q(2, 1) * width;
            if !(v[i].is_zero() && v[i + 1].is_zero()) {
                supp_len += width;
            }
        }
        direct *= w;
        let mut supp = supp_len * w;
        for (p, a) in &atoms {
            let fp = eval_pl(&f, p);
            direct += a * fp;
            if !fp.is_zero() {
                supp += a;
            }
        }
        let lc = pl_layer_cake(&f, &mu);
        ensure(lc == direct, || {
            format!("layer cake {lc} ≠ ∫f dμ = {direct} for {f}")
        })?;
        let dt = pl_dtau(&f, &mu);
        ensure(dt == supp, || {
            format!("d_τ {dt} ≠ μ(supp) = {supp} for {f}")
        })?;
    }
    Ok("100 random functions and measures".into())
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for s in [softened(1), softened(2)] {
        for d in 1..=12 {
            for k in 0..=8 * d {
                let target = RankFunction::Linear(Ext::Finite(q(k, d)));
                let a = alpha(&s, &target).map_err(|e| e.to_string())?;
                let r = rank_of(&s, &a).map_err(|e| e.to_string())?;
                ensure(r == target, || {
                    format!("{}: rank(alpha({target})) = {r}", s.label())
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} slopes"))
}

fn criterion_8() -> Outcome {
    let n = nbar();
    let p = cu_product(vec![n.clone(), n.clone()]);
    let ideal = ideal_generated(&p, &p.parse("(1, 0)").unwrap()).map_err(|e| e.to_string())?;
    let qs = quotient(&p, &ideal).map_err(|e| e.to_string())?;
    let kq = qs.kind::<Quotient<i128>>().unwrap();
    let kp = p.kind::<CuProduct<i128>>().unwrap();
    let psi = |x: &Elem| {
        qs.element(
            kq.class_of(&p.element(kp.inject(1, x.value())).unwrap())
                .unwrap(),
        )
        .unwrap()
    };
    let xs = n.grid(&Grid::new(8, 1));
    isomorphic_on(&n, &qs, &xs, psi)?;
    let frag = p.grid(&Grid::new(8, 1));
    for a in &frag {
        let class = qs.element(kq.class_of(a).unwrap()).unwrap();
        ensure(xs.iter().any(|x| psi(x) == class), || {
            format!("class of {} is not hit", p.render(a))
        })?;
    }
    let members: Vec<&Elem> = frag.iter().filter(|c| ideal.contains(c).unwrap()).collect();
    for a in &frag {
        for b in &frag {
            let brute = members
                .iter()
                .any(|c| p.leq(a, &p.add(b, c).unwrap()).unwrap());
            ensure(ideal.leq_mod(a, b).unwrap() == brute, || {
                format!("≤_I at {} {}", p.render(a), p.render(b))
            })?;
        }
    }
    Ok(format!(
        "{} triples",
        frag.len() * frag.len() * members.len()
    ))
}

fn nbar_value(v: &Value<i128>) -> Option<i64> {
    match v {
        Value::Compact(x) => cuntz::scalar::to_i64(x),
        _ => None,
    }
}

fn criterion_9() -> Outcome {
    let n = nbar();
    let p = cu_product(vec![n.clone(), n.clone()]);
    let xs = p.grid(&Grid::new(8, 1));
    let parts = |e: &Elem| -> Vec<Option<i64>> {
        match e.value() {
            Value::Tuple(v) => v.iter().map(nbar_value).collect(),
            _ => unreachable!(),
        }
    };
    let le = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    };
    let wb = |a: Option<i64>, b: Option<i64>| a.is_some() && le(a, b);
    let plus = |a: Option<i64>, b: Option<i64>| a.zip(b).map(|(x, y)| x + y);
    for a in &xs {
        for b in &xs {
            let (u, v) = (parts(a), parts(b));
            ensure(
                p.leq(a, b).unwrap() == (le(u[0], v[0]) && le(u[1], v[1])),
                || "product ≤".into(),
            )?;
            ensure(
                p.way_below(a, b).unwrap() == (wb(u[0], v[0]) && wb(u[1], v[1])),
                || "product ≪".into(),
            )?;
            let sum = parts(&p.add(a, b).unwrap());
            ensure(sum == vec![plus(u[0], v[0]), plus(u[1], v[1])], || {
                "product +".into()
            })?;
        }
    }

    let s1 = softened(1);
    let u = Ultrafilter::principal(2, 1).map_err(|e| e.to_string())?;
    let up = ultraproduct(vec![n.clone(), s1.clone()], &u).map_err(|e| e.to_string())?;
    let kq = up.kind::<Quotient<i128>>().unwrap();
    let kp = kq.base.kind::<CuProduct<i128>>().unwrap();
    let class = |x: &Elem| {
        up.element(
            kq.class_of(&kq.base.element(kp.inject(1, x.value())).unwrap())
                .unwrap(),
        )
        .unwrap()
    };
    let ys = s1.grid(&Grid::new(4, 4));
    isomorphic_on(&s1, &up, &ys, class)?;

    let sp = seq_product_nbar::<i128>();
    let g = sp.element(Value::Seq(SeqFn::identity())).unwrap();
    let ones = sp.element(Value::Seq(SeqFn::constant(1))).unwrap();
    for k in 0..=64u64 {
        ensure(
            !sp.leq(&g, &sp.multiple(&ones, k).unwrap()).unwrap(),
            || format!("g ≤ {k}·1"),
        )?;
    }
    ensure(!in_bounded_scale(&sp, &g).unwrap(), || {
        "g flagged inside the scale".into()
    })?;
    ensure(
        in_bounded_scale(&sp, &sp.multiple(&ones, 7).unwrap()).unwrap(),
        || "7·1 outside the scale".into(),
    )?;
    Ok(format!(
        "{} product pairs, {} ultraproduct pairs",
        xs.len().pow(2),
        ys.len().pow(2)
    ))
}

/// The finite values on the ideal form `{0, …, m}` with `m ≥ 1`, and `∞` occurs.
fn elementary_values(
    s: &Semigroup,
    lam: &Functional<i128>,
    probe: &[Elem],
    inside: impl Fn(&Elem) -> bool,
) -> Result<(), String> {
    let mut finite = Vec::new();
    let mut saw_inf = false;
    for x in probe.iter().filter(|x| inside(x)) {
        match evaluate(lam, x).map_err(|e| e.to_string())? {
            Ext::Finite(v) => {
                ensure(v.is_integer(), || {
                    format!("non-integer value at {}", s.render(x))
                })?;
                finite.push(cuntz::scalar::to_i64(&v).unwrap());
            }
            Ext::Infinite => saw_inf = true,
        }
    }
    finite.sort();
    finite.dedup();
    let m = *finite.last().unwrap_or(&0);
    ensure(
        m >= 1 && finite == (0..=m).collect::<Vec<_>>() && saw_inf,
        || format!("value set {finite:?}, ∞: {saw_inf}"),
    )
}

fn criterion_10() -> Outcome {
    let n = nbar();
    let (lam, ideal) = detect_elementary(&n)
        .map_err(|e| e.to_string())?
        .ok_or("nothing found on nbar")?;
    elementary_values(&n, &lam, &n.grid(&Grid::new(6, 1)), |x| {
        ideal.contains(x).unwrap()
    })?;
    let p = cu_product(vec![nbar(), nbar()]);
    let (lam2, ideal2) = detect_elementary(&p)
        .map_err(|e| e.to_string())?
        .ok_or("nothing found on nbar^2")?;
    let probe = p.grid(&Grid::new(4, 1));
    elementary_values(&p, &lam2, &probe, |x| ideal2.contains(x).unwrap())?;
    ensure(
        ideal2.contains(&p.parse("(inf, 0)").unwrap()).unwrap(),
        || "ideal misses (inf, 0)".into(),
    )?;
    ensure(
        !ideal2.contains(&p.parse("(0, 1)").unwrap()).unwrap(),
        || "ideal contains (0, 1)".into(),
    )?;
    ensure(
        detect_elementary(&softened::<i128>(1))
            .map_err(|e| e.to_string())?
            .is_none(),
        || "softened(1) has a witness".into(),
    )?;
    Ok(format!("nbar: {}; nbar^2: {}", lam.render(), lam2.render()))
}

fn criterion_11() -> Outcome {
    let m = make_catalog(CatalogKind::NBar, 2).map_err(|e| e.to_string())?;
    let bx = GroupBox {
        radius: 8,
        max_den: 8,
    };
    let (g, r) = grothendieck_interpolation(&m, &Fragment::grid(&m, &Grid::new(8, 16)), bx)
        .map_err(|e| e.to_string())?;
    let name = &g.kind::<GrothendieckGroup<i128>>().unwrap().name;
    ensure(name == "Z[1/2]", || format!("group named {name}"))?;
    ensure(r.passed(), || {
        format!("Z[1/2] interpolation {:?}", r.verdict)
    })?;
    // The order must be the usual order of rationals, a total order.
    let els = g.grid(&Grid::new(8, 8));
    let num = |e: &Elem| match e.value() {
        Value::Tuple(v) => match &v[0] {
            Value::Compact(x) => *x,
            _ => unreachable!(),
        },
        _ => unreachable!(),
    };
    ensure(els.len() == 129, || {
        format!("box has {} elements", els.len())
    })?;
    for a in &els {
        for b in &els {
            ensure(g.leq(a, b).unwrap() == (num(a) <= num(b)), || {
                "Z[1/2] order".into()
            })?;
        }
    }

    let gap = gap_model();
    let gb = GroupBox {
        radius: 3,
        max_den: 1,
    };
    let (h, r) = grothendieck_interpolation(&gap, &Fragment::grid(&gap, &Grid::new(3, 1)), gb)
        .map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Fail, || {
        "gap interpolation did not fail".into()
    })?;
    let w: Vec<&Elem> = ["a1", "a2", "b1", "b2"]
        .iter()
        .map(|k| r.get(k).unwrap())
        .collect();
    ensure(
        is_interpolation_gap(&h, [w[0], w[1], w[2], w[3]], gb).unwrap(),
        || "witness does not replay".into(),
    )?;
    // Independent check: (r,e) ≤ (r',e') iff equal or r' ≥ r + 2.
    let coords = |e: &Elem| -> (Rational, Rational) {
        match e.value() {
            Value::Tuple(v) => match (&v[0], &v[1]) {
                (Value::Compact(a), Value::Compact(b)) => (*a, *b),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    };
    let le = |a: &(Rational, Rational), b: &(Rational, Rational)| a == b || b.0 >= a.0 + q(2, 1);
    let c: Vec<(Rational, Rational)> = w.iter().map(|e| coords(e)).collect();
    ensure(
        le(&c[0], &c[2]) && le(&c[0], &c[3]) && le(&c[1], &c[2]) && le(&c[1], &c[3]),
        || "witness not ordered".into(),
    )?;
    for e in h.grid(&Grid::new(3, 1)) {
        let x = coords(&e);
        ensure(
            !(le(&c[0], &x) && le(&c[1], &x) && le(&x, &c[2]) && le(&x, &c[3])),
            || "interpolant exists".into(),
        )?;
    }
    let shown: Vec<String> = w.iter().map(|e| h.render(e)).collect();
    Ok(format!(
        "Z[1/2] passes on 129 elements; gap fails at {}",
        shown.join(", ")
    ))
}

fn random_spectral(rng: &mut ChaCha8Rng) -> SpectralElement<i128> {
    let dim = rng.gen_range(1..=5usize);
    SpectralElement::new(
        (0..dim)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Rational::zero()
                } else {
                    random_rational(rng, 2, 7)
                }
            })
            .collect(),
    )
    .unwrap()
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = nbar();
    let mut agree = [0usize; 2];
    for _ in 0..200 {
        let (a, b) = (
            ConcreteElement::Spectral(random_spectral(&mut rng)),
            ConcreteElement::Spectral(random_spectral(&mut rng)),
        );
        let (ca, cb) = (
            to_cuntz_class(&a, &n).unwrap(),
            to_cuntz_class(&b, &n).unwrap(),
        );
        let le = cuntz_leq(&a, &b);
        ensure(le == n.leq(&ca, &cb).unwrap(), || {
            format!("spectral pair {a:?} {b:?}")
        })?;
        agree[le as usize] += 1;
    }
    let h = interval_handle();
    let mut pl_agree = [0usize; 2];
    for _ in 0..200 {
        let (f, g) = (random_pl(&mut rng, 4), random_pl(&mut rng, 4));
        let (cf, cg) = (
            to_cuntz_class(&ConcreteElement::Pl(f.clone()), &h).unwrap(),
            to_cuntz_class(&ConcreteElement::Pl(g.clone()), &h).unwrap(),
        );
        let le = cuntz_leq(
            &ConcreteElement::Pl(f.clone()),
            &ConcreteElement::Pl(g.clone()),
        );
        ensure(le == h.leq(&cf, &cg).unwrap(), || {
            format!("PL pair {f} {g}")
        })?;
        pl_agree[le as usize] += 1;
    }
    ensure(agree.iter().chain(&pl_agree).all(|c| *c > 0), || {
        format!("degenerate sample {agree:?} {pl_agree:?}")
    })?;
    Ok(format!(
        "spectral ≼/⋠ {}/{}, PL ≼/⋠ {}/{}",
        agree[1], agree[0], pl_agree[1], pl_agree[0]
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("gamma completion of N[1/2] is softened(2)", criterion_1),
        ("direct limits", criterion_2),
        ("tau completion of [0,inf]", criterion_3),
        ("axiom suite verdicts", criterion_4),
        ("spectral layer cake and d_tau", criterion_5),
        ("PL layer cake and support measure", criterion_6),
        ("rank realization", criterion_7),
        ("quotient by an ideal", criterion_8),
        ("products and ultraproducts", criterion_9),
        ("elementary detection", criterion_10),
        ("Grothendieck interpolation", criterion_11),
        ("concrete to abstract classes", criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of 12 criteria passed in {:.2}s",
        12 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
