//! Built-in fixtures runnable as `demo` queries.

use cuntz::axioms::{check_axiom, glued_chain3, replay, Axiom, Fragment, Verdict};
use cuntz::catalog::{make_dimension_drop, make_finite_table, nbar, softened, FiniteTable};
use cuntz::constructions::{
    direct_limit, gamma_completion, in_bounded_scale, seq_product_nbar, AuxRel, Morphism,
    MorphismAction, SeqFn, WSemigroup,
};
use cuntz::scalar::fmt_rational;
use cuntz::{Elem, Grid, Rational, Semigroup, Value};

use crate::error::CliError;
use crate::report::{Check, Outcome};

pub const DEMOS: [&str; 5] = [
    "cu-of-Z",
    "car-algebra",
    "toeplitz-wc",
    "sphere-o6plus",
    "ellinfty-product",
];

pub fn run_demo(name: &str) -> Result<Outcome, CliError> {
    match name {
        "cu-of-Z" => cu_of_z(),
        "car-algebra" => car_algebra(),
        "toeplitz-wc" => toeplitz_wc(),
        "sphere-o6plus" => sphere_o6plus(),
        "ellinfty-product" => ellinfty_product(),
        _ => Err(CliError::UnknownFixture(name.to_string())),
    }
}

/// Number of pairs on which `phi` fails to carry `≤`, `≪` and `+` of `s` to `t`, or the first bad pair.
fn transports(
    s: &Semigroup,
    t: &Semigroup,
    xs: &[Elem],
    phi: &dyn Fn(&Elem) -> Elem,
) -> Result<Result<usize, (String, String)>, CliError> {
    for a in xs {
        for b in xs {
            let (pa, pb) = (phi(a), phi(b));
            let ok = s.leq(a, b)? == t.leq(&pa, &pb)?
                && s.way_below(a, b)? == t.way_below(&pa, &pb)?
                && phi(&s.add(a, b)?) == t.add(&pa, &pb)?;
            if !ok {
                return Ok(Err((s.render(a), s.render(b))));
            }
        }
    }
    Ok(Ok(xs.len() * xs.len()))
}

fn transport_check(label: &str, r: Result<usize, (String, String)>) -> Check {
    match r {
        Ok(n) => Check::expect(format!("{label} ({n} pairs)"), true),
        Err((a, b)) => {
            Check::expect(label, false).with_witness(vec![("a".into(), a), ("b".into(), b)])
        }
    }
}

/// `c:x ↦ const(x)` and `s:x ↦ lim(x)`.
fn into_completion(s: &Semigroup, g: &Semigroup) -> impl Fn(&Elem) -> Elem {
    let (s, g) = (s.clone(), g.clone());
    move |x| {
        let r = s.render(x);
        let text = match r.split_once(':') {
            Some(("c", v)) => format!("const({v})"),
            Some((_, v)) => format!("lim({v})"),
            None => r,
        };
        g.parse(&text).expect("completion classes parse")
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n as i128, d as i128)
}

/// The three mixed laws of the softened integers, checked through `phi`.
fn mixed_laws(
    s: &Semigroup,
    t: &Semigroup,
    phi: &dyn Fn(&Elem) -> Elem,
) -> Result<[Check; 3], CliError> {
    let mut bad: [Option<String>; 3] = [None, None, None];
    let mut count = 0;
    for n in 0..=6 {
        for d in 1..=12 {
            for k in 1..=6 * d {
                let x = q(k, d);
                let c = phi(&s.parse(&format!("c:{n}"))?);
                let sx = phi(&s.parse(&format!("s:{}", fmt_rational(&x)))?);
                let sum = phi(&s.parse(&format!("s:{}", fmt_rational(&(x + q(n, 1)))))?);
                let at = || format!("x={}, n={n}", fmt_rational(&x));
                if t.leq(&sx, &c)? != (x <= q(n, 1)) {
                    bad[0].get_or_insert_with(at);
                }
                if t.leq(&c, &sx)? != (q(n, 1) < x) {
                    bad[1].get_or_insert_with(at);
                }
                if t.add(&c, &sx)? != sum {
                    bad[2].get_or_insert_with(at);
                }
                count += 1;
            }
        }
    }
    let laws = [
        "s_x <= c_n iff x <= n",
        "c_n <= s_x iff n < x",
        "c_n + s_x = s_(n+x)",
    ];
    Ok(std::array::from_fn(|i| {
        let c = Check::expect(format!("{} ({count} instances)", laws[i]), bad[i].is_none());
        match &bad[i] {
            Some(w) => c.with_witness(vec![("at".into(), w.clone())]),
            None => c,
        }
    }))
}

fn cu_of_z() -> Result<Outcome, CliError> {
    let d = make_dimension_drop();
    let int = Morphism::new(d.clone(), d.clone(), MorphismAction::Integration)?;
    let z = direct_limit(std::slice::from_ref(&d), &[int])?;
    let s1 = softened(1);
    let phi = {
        let (s1, z) = (s1.clone(), z.clone());
        move |x: &Elem| {
            z.parse(&format!("const({})", s1.render(x)))
                .expect("scalar constants parse")
        }
    };
    let frag = s1.grid(&Grid::new(4, 6));
    let mut lines = vec![
        format!("stage: {}", d.label()),
        "connecting map: integration, f -> const(int f)".to_string(),
        format!("limit: {}", z.label()),
    ];
    for (a, b) in [("c:1", "s:1"), ("s:1", "c:1"), ("c:2", "s:5/2")] {
        let (x, y) = (phi(&s1.parse(a)?), phi(&s1.parse(b)?));
        lines.push(format!(
            "{} <= {}: {}",
            z.render(&x),
            z.render(&y),
            z.leq(&x, &y)?
        ));
    }
    let mut checks = vec![transport_check(
        "limit agrees with softened(1)",
        transports(&s1, &z, &frag, &phi)?,
    )];
    checks.extend(mixed_laws(&s1, &z, &phi)?);
    Ok(Outcome::Demo { lines, checks })
}

fn car_algebra() -> Result<Outcome, CliError> {
    let s2 = softened(2);
    let g = gamma_completion(WSemigroup::scalars(2, false, AuxRel::Leq)?);
    let n = nbar();
    let l = direct_limit(
        std::slice::from_ref(&n),
        &[Morphism::new(
            n.clone(),
            n.clone(),
            MorphismAction::Scale(2),
        )?],
    )?;
    let xs = s2.grid(&Grid::compact_dens(4, 8));
    let mut lines = vec![format!("semigroup: {}", s2.label())];
    for (a, b) in [
        ("s:1/2", "c:1/2"),
        ("c:1/2", "s:1/2"),
        ("c:1/4", "s:1/2"),
        ("c:1/2", "c:1/2"),
    ] {
        let (x, y) = (s2.parse(a)?, s2.parse(b)?);
        lines.push(format!(
            "{a} <= {b}: {}, {a} << {b}: {}",
            s2.leq(&x, &y)?,
            s2.way_below(&x, &y)?
        ));
    }
    let (c, s) = (s2.parse("c:1/4")?, s2.parse("s:1/2")?);
    lines.push(format!("c:1/4 + s:1/2 = {}", s2.render(&s2.add(&c, &s)?)));
    let checks = vec![
        transport_check(
            "gamma completion of N[1/2] agrees",
            transports(&s2, &g, &xs, &into_completion(&s2, &g))?,
        ),
        transport_check(
            "limit of nbar under x2 agrees",
            transports(&s2, &l, &xs, &into_completion(&s2, &l))?,
        ),
        Check::expect("s:1/2 <= c:1/2 and not c:1/2 <= s:1/2", {
            let (s, c) = (s2.parse("s:1/2")?, s2.parse("c:1/2")?);
            s2.leq(&s, &c)? && !s2.leq(&c, &s)?
        }),
    ];
    Ok(Outcome::Demo { lines, checks })
}

fn toeplitz_wc() -> Result<Outcome, CliError> {
    let t = make_finite_table(FiniteTable::zero_infinity())?;
    let frag = Fragment::default_for(&t);
    let r = check_axiom(&t, Axiom::WC, &frag)?;
    let (inf, zero) = (t.parse("inf")?, t.parse("0")?);
    let lines = vec![
        format!("semigroup: {}", t.label()),
        format!("inf << inf: {}", t.way_below(&inf, &inf)?),
        format!("inf << 0: {}", t.way_below(&inf, &zero)?),
        format!("WC: {}", Check::from_report(&t, &r).verdict),
    ];
    let w: Vec<(String, String)> = r.rendered(&t);
    let values: Vec<&str> = w.iter().map(|(_, v)| v.as_str()).collect();
    let checks = vec![
        Check::expect(
            "weak cancellation fails at (inf, 0, inf)",
            r.verdict == Verdict::Fail && values == ["inf", "0", "inf"],
        )
        .with_witness(w.clone()),
        Check::expect(
            "witness replays",
            r.verdict == Verdict::Fail && replay(&t, &frag, &r)?,
        ),
    ];
    Ok(Outcome::Demo { lines, checks })
}

fn sphere_o6plus() -> Result<Outcome, CliError> {
    let s: Semigroup = glued_chain3();
    let frag = Fragment::default_for(&s);
    let mut lines = vec![
        format!("semigroup: {}", s.label()),
        format!("fragment: {} elements", frag.len()),
    ];
    for ax in [Axiom::O1, Axiom::O2, Axiom::O3, Axiom::O4] {
        lines.push(format!(
            "{}: {}",
            ax.name(),
            check_axiom(&s, ax, &frag)?.verdict.name()
        ));
    }
    let r = check_axiom(&s, Axiom::O6Plus, &frag)?;
    let checks = vec![
        Check::expect("O6plus fails", r.verdict == Verdict::Fail).with_witness(r.rendered(&s)),
        Check::expect(
            "witness replays",
            r.verdict == Verdict::Fail && replay(&s, &frag, &r)?,
        ),
    ];
    Ok(Outcome::Demo { lines, checks })
}

fn ellinfty_product() -> Result<Outcome, CliError> {
    let p: Semigroup = seq_product_nbar();
    let g = p.element(Value::Seq(SeqFn::identity()))?;
    let ones = p.element(Value::Seq(SeqFn::constant(1)))?;
    let mut below = None;
    for n in 1..=64 {
        if p.leq(&g, &p.multiple(&ones, n)?)? {
            below = Some(n);
            break;
        }
    }
    let seven = p.multiple(&ones, 7)?;
    let lines = vec![
        format!("semigroup: {}", p.label()),
        format!("g = {}, 1 = {}", p.render(&g), p.render(&ones)),
        format!("infinity of 1: {}", p.render(&p.infinity_of(&ones)?)),
        format!("g compact: {}", p.is_compact(&g)?),
    ];
    let checks = vec![
        Check::expect("g is below no n*1 for n <= 64", below.is_none()),
        Check::expect("g lies outside the scale", !in_bounded_scale(&p, &g)?),
        Check::expect("7*1 lies inside the scale", in_bounded_scale(&p, &seven)?),
    ];
    Ok(Outcome::Demo { lines, checks })
}
