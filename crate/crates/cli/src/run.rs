//! Query execution.

use std::time::Instant;

use cuntz::axioms::{
    check_almost_unperforation, check_axiom, check_strict_comparison, simplicity, Axiom, Fragment,
};
use cuntz::catalog::nbar;
use cuntz::concrete::{
    cuntz_leq, interval_handle, layer_cake_trace, pl_dtau, pl_layer_cake, pl_way_below,
    rordam_witness, spectral_cutdown, spectral_dtau, to_cuntz_class, ConcreteElement, PLFunction,
    RationalMeasure, SpectralElement,
};
use cuntz::constructions::{
    grothendieck_interpolation, in_bounded_scale, GroupBox, Ideal, Quotient,
};
use cuntz::functionals::{
    alpha, detect_elementary, evaluate, functional_space, normalized, rank_of, Functional,
    RankFunction,
};
use cuntz::scalar::fmt_rational;
use cuntz::{Descriptor, Ext, Grid, Rational, Semigroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::demos;
use crate::document::{
    CompareOp, ConcreteOp, ConstructOp, Document, FunctionalOp, MeasureSpec, Query,
};
use crate::env::Env;
use crate::error::CliError;
use crate::report::{Check, Entry, Outcome, Report};

/// Overrides taken from the command line.
#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Only queries of this command run.
    pub command: Option<String>,
    pub seed: Option<u64>,
    /// Replaces the denominator bound of the document.
    pub bound: Option<i64>,
    pub timing: bool,
}

pub const COMMANDS: [&str; 6] = [
    "compare",
    "axioms",
    "construct",
    "functionals",
    "concrete",
    "demo",
];

const DEFAULT_AXIOMS: [Axiom; 9] = [
    Axiom::O1,
    Axiom::O2,
    Axiom::O3,
    Axiom::O4,
    Axiom::O5,
    Axiom::O6,
    Axiom::O6Plus,
    Axiom::WC,
    Axiom::Riesz,
];

/// Loads the document and runs its queries in order. Bad references abort the
/// run; computations that fail become error entries.
pub fn run(doc: &Document, opts: &Options) -> Result<Report, CliError> {
    if let Some(c) = &opts.command {
        if !COMMANDS.contains(&c.as_str()) {
            return Err(CliError::validation(
                "command",
                format!("unknown command {c:?}"),
            ));
        }
    }
    if let Some(b) = opts.bound {
        if b < 1 {
            return Err(CliError::validation("bound", "must be positive"));
        }
    }
    let mut env = Env::load(doc)?;
    if let Some(b) = opts.bound {
        env.settings.max_den = b;
    }
    if let Some(s) = opts.seed {
        env.settings.seed = Some(s);
    }
    let mut entries = Vec::new();
    for (i, q) in doc.queries.iter().enumerate() {
        if opts.command.as_deref().is_some_and(|c| c != q.command()) {
            continue;
        }
        let start = Instant::now();
        let result = match run_query(&env, q) {
            Ok(r) => r,
            Err(e @ (CliError::Validation { .. } | CliError::UnknownFixture(_))) => return Err(e),
            Err(e) => Outcome::Error {
                message: e.to_string(),
            },
        };
        entries.push(Entry {
            index: i + 1,
            command: q.command().to_string(),
            query: describe(q),
            result,
            elapsed_us: opts.timing.then(|| start.elapsed().as_micros()),
        });
    }
    Ok(Report::new(entries))
}

pub fn describe(q: &Query) -> String {
    match q {
        Query::Compare { op, a, b } => {
            let op = serde_json::to_value(op).expect("ops serialize");
            let op = op.as_str().unwrap_or("?");
            match b {
                Some(b) => format!("compare {op}({a}, {b})"),
                None => format!("compare {op}({a})"),
            }
        }
        Query::Axioms {
            semigroup,
            fragment,
            ..
        } => match fragment {
            Some(f) => format!("axioms {semigroup} on {f}"),
            None => format!("axioms {semigroup} on the default fragment"),
        },
        Query::Construct { op } => format!("construct {}", op_text(op)),
        Query::Functionals { op } => format!("functionals {}", op_text(op)),
        Query::Concrete { op } => format!("concrete {}", op_text(op)),
        Query::Demo { name } => format!("demo {name}"),
    }
}

/// The op as compact JSON, used as a label.
fn op_text<T: serde::Serialize>(op: &T) -> String {
    let v = serde_json::to_value(op).expect("ops serialize");
    let mut parts = Vec::new();
    if let serde_json::Value::Object(m) = v {
        let name = m
            .get("op")
            .and_then(|o| o.as_str())
            .unwrap_or("?")
            .to_string();
        for (k, v) in &m {
            if k != "op" {
                parts.push(format!("{k}={}", v.to_string().trim_matches('"')));
            }
        }
        return format!("{name}({})", parts.join(", "));
    }
    String::new()
}

fn run_query(env: &Env, q: &Query) -> Result<Outcome, CliError> {
    match q {
        Query::Compare { op, a, b } => compare(env, *op, a, b.as_deref()),
        Query::Axioms {
            semigroup,
            axioms,
            fragment,
            functionals,
        } => run_axioms(env, semigroup, axioms, fragment.as_deref(), functionals),
        Query::Construct { op } => construct(env, op),
        Query::Functionals { op } => functionals(env, op),
        Query::Concrete { op } => concrete(env, op),
        Query::Demo { name } => demos::run_demo(name),
    }
}

fn compare(env: &Env, op: CompareOp, a: &str, b: Option<&str>) -> Result<Outcome, CliError> {
    let (s, x) = env.abstract_element(a)?;
    if !op.binary() {
        return Ok(match op {
            CompareOp::Compact => Outcome::Bool {
                value: s.is_compact(x)?,
            },
            _ => Outcome::Value {
                value: s.render(&s.infinity_of(x)?),
            },
        });
    }
    let b =
        b.ok_or_else(|| CliError::validation(a, "this comparison needs a second element \"b\""))?;
    let (t, y) = env.abstract_element(b)?;
    if s != t {
        return Err(CliError::validation(
            b,
            format!("lives in {}, not {}", t.label(), s.label()),
        ));
    }
    Ok(match op {
        CompareOp::Leq => Outcome::Bool {
            value: s.leq(x, y)?,
        },
        CompareOp::WayBelow => Outcome::Bool {
            value: s.way_below(x, y)?,
        },
        CompareOp::Equal => Outcome::Bool {
            value: s.equiv(x, y)?,
        },
        CompareOp::Add => Outcome::Value {
            value: s.render(&s.add(x, y)?),
        },
        _ => Outcome::Value {
            value: s
                .wedge(x, y)?
                .map_or_else(|| "none".to_string(), |w| s.render(&w)),
        },
    })
}

fn fragment_for(env: &Env, s: &Semigroup, name: Option<&str>) -> Result<Fragment<i128>, CliError> {
    match name {
        Some(f) => {
            let (t, frag) = env.fragment(f)?;
            if t != s {
                return Err(CliError::validation(
                    f,
                    format!("is a fragment of {}, not {}", t.label(), s.label()),
                ));
            }
            Ok(frag.clone())
        }
        None => Ok(Fragment::default_for(s)),
    }
}

fn run_axioms(
    env: &Env,
    sg: &str,
    names: &[String],
    frag: Option<&str>,
    fs: &[String],
) -> Result<Outcome, CliError> {
    let s = env.semigroup(sg)?;
    let frag = fragment_for(env, s, frag)?;
    let axioms = if names.is_empty() {
        DEFAULT_AXIOMS.to_vec()
    } else {
        names
            .iter()
            .map(|n| Axiom::parse(n).map_err(|e| CliError::validation(n, e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let mut checks = Vec::new();
    for ax in axioms {
        let r = match ax {
            Axiom::AlmostUnperforation => check_almost_unperforation(s, &frag, env.settings.n_max)?,
            Axiom::StrictComparison => {
                let fam: Vec<Functional<i128>> = fs
                    .iter()
                    .map(|f| env.functional(f).cloned())
                    .collect::<Result<_, _>>()?;
                check_strict_comparison(s, &frag, &fam)?
            }
            Axiom::Simple => simplicity(s, &frag)?,
            Axiom::Interpolation => {
                return Err(CliError::validation(
                    ax.name(),
                    "use the construct op \"interpolation\"",
                ));
            }
            _ => check_axiom(s, ax, &frag)?,
        };
        checks.push(Check::from_report(s, &r));
    }
    Ok(Outcome::Checks { checks })
}

fn construct(env: &Env, op: &ConstructOp) -> Result<Outcome, CliError> {
    Ok(match op {
        ConstructOp::Label { semigroup } => Outcome::Value {
            value: env.semigroup(semigroup)?.label(),
        },
        ConstructOp::Grid {
            semigroup,
            max_value,
        } => {
            let s = env.semigroup(semigroup)?;
            if *max_value < 0 {
                return Err(CliError::validation("max_value", "must be nonnegative"));
            }
            let g = s.grid(&Grid::new(*max_value, env.settings.max_den));
            Outcome::List {
                values: g.iter().map(|x| s.render(x)).collect(),
            }
        }
        ConstructOp::Sup {
            semigroup,
            sequence,
        } => {
            let s = env.semigroup(semigroup)?;
            let base = s.parse(&sequence.base)?;
            let d = match &sequence.step {
                Some(t) => Descriptor::affine(vec![], base, s.parse(t)?),
                None => Descriptor::constant(base),
            };
            Outcome::Value {
                value: s.render(&s.sup(&d)?),
            }
        }
        ConstructOp::Class { semigroup, element } => {
            let q = env.semigroup(semigroup)?;
            let k = q.kind::<Quotient<i128>>().ok_or_else(|| {
                CliError::validation(semigroup, "is not a quotient or ultraproduct")
            })?;
            let (s, x) = env.abstract_element(element)?;
            if *s != k.base {
                return Err(CliError::validation(
                    element,
                    format!("is not an element of {}", k.base.label()),
                ));
            }
            Outcome::Value {
                value: q.render(&q.element(k.class_of(x)?)?),
            }
        }
        ConstructOp::Apply { morphism, element } => {
            let m = env.morphism(morphism)?;
            let (_, x) = env.abstract_element(element)?;
            Outcome::Value {
                value: m.codomain.render(&m.apply(x)?),
            }
        }
        ConstructOp::IdealContains { generator, element } => {
            let (s, g) = env.abstract_element(generator)?;
            let (t, x) = env.abstract_element(element)?;
            if s != t {
                return Err(CliError::validation(
                    element,
                    "is not in the semigroup of the generator",
                ));
            }
            Outcome::Bool {
                value: Ideal::generated(s, g)?.contains(x)?,
            }
        }
        ConstructOp::Interpolation {
            semigroup,
            radius,
            max_den,
            fragment,
        } => {
            let s = env.semigroup(semigroup)?;
            let frag = fragment_for(env, s, fragment.as_deref())?;
            let bx = GroupBox {
                radius: *radius,
                max_den: max_den.unwrap_or(env.settings.max_den),
            };
            let (g, r) = grothendieck_interpolation(s, &frag, bx)?;
            let mut c = Check::from_report(&g, &r);
            c.name = format!("Interpolation in {}", g.label());
            Outcome::Checks { checks: vec![c] }
        }
        ConstructOp::InScale { element } => {
            let (s, x) = env.abstract_element(element)?;
            Outcome::Bool {
                value: in_bounded_scale(s, x)?,
            }
        }
    })
}

fn functionals(env: &Env, op: &FunctionalOp) -> Result<Outcome, CliError> {
    let list = |fs: Vec<Functional<i128>>| Outcome::List {
        values: fs.iter().map(Functional::render).collect(),
    };
    Ok(match op {
        FunctionalOp::Evaluate {
            functional,
            element,
        } => {
            let f = env.functional(functional)?;
            let (_, x) = env.abstract_element(element)?;
            Outcome::Value {
                value: evaluate(f, x)?.to_string(),
            }
        }
        FunctionalOp::Rank { element } => {
            let (s, x) = env.abstract_element(element)?;
            Outcome::Value {
                value: rank_of(s, x)?.to_string(),
            }
        }
        FunctionalOp::Realize { semigroup, slope } => {
            let s = env.semigroup(semigroup)?;
            Outcome::Value {
                value: s.render(&alpha(s, &RankFunction::Linear(slope.0.clone()))?),
            }
        }
        FunctionalOp::Space { semigroup } => list(functional_space(env.semigroup(semigroup)?)?),
        FunctionalOp::Normalized { semigroup, at } => {
            let s = env.semigroup(semigroup)?;
            let (t, x) = env.abstract_element(at)?;
            if s != t {
                return Err(CliError::validation(
                    at,
                    format!("is not an element of {}", s.label()),
                ));
            }
            list(normalized(s, x)?)
        }
        FunctionalOp::DetectElementary { semigroup } => {
            let s = env.semigroup(semigroup)?;
            let value = match detect_elementary(s)? {
                Some((f, ideal)) => {
                    format!("{} with ideal top {}", f.render(), s.render(&ideal.top))
                }
                None => "none".into(),
            };
            Outcome::Value { value }
        }
    })
}

fn measure(m: &Option<MeasureSpec>) -> Result<RationalMeasure<i128>, CliError> {
    Ok(match m {
        Some(m) => RationalMeasure::new(
            m.lebesgue.0,
            m.atoms.iter().map(|(p, w)| (p.0, w.0)).collect(),
        )?,
        None => RationalMeasure::lebesgue(),
    })
}

fn pair<'a>(
    env: &'a Env,
    a: &str,
    b: &str,
) -> Result<(&'a ConcreteElement<i128>, &'a ConcreteElement<i128>), CliError> {
    let (x, y) = (env.concrete_element(a)?, env.concrete_element(b)?);
    if std::mem::discriminant(x) != std::mem::discriminant(y) {
        return Err(CliError::validation(
            b,
            format!("is not the same kind of element as {a}"),
        ));
    }
    Ok((x, y))
}

fn target(x: &ConcreteElement<i128>) -> Semigroup {
    match x {
        ConcreteElement::Spectral(_) => nbar(),
        ConcreteElement::Pl(_) => interval_handle(),
    }
}

fn concrete(env: &Env, op: &ConcreteOp) -> Result<Outcome, CliError> {
    let value = |q: Rational| Outcome::Value {
        value: fmt_rational(&q),
    };
    Ok(match op {
        ConcreteOp::Leq { a, b } => {
            let (x, y) = pair(env, a, b)?;
            Outcome::Bool {
                value: cuntz_leq(x, y),
            }
        }
        ConcreteOp::WayBelow { a, b } => match pair(env, a, b)? {
            // Every class of a matrix algebra is compact.
            (x @ ConcreteElement::Spectral(_), y) => Outcome::Bool {
                value: cuntz_leq(x, y),
            },
            (ConcreteElement::Pl(f), ConcreteElement::Pl(g)) => Outcome::Bool {
                value: pl_way_below(f, g),
            },
            _ => unreachable!("pair checks the kinds"),
        },
        ConcreteOp::Class { a } => {
            let x = env.concrete_element(a)?;
            let t = target(x);
            Outcome::Value {
                value: t.render(&to_cuntz_class(x, &t)?),
            }
        }
        ConcreteOp::Cutdown { a, eps } => Outcome::Value {
            value: match env.concrete_element(a)? {
                ConcreteElement::Spectral(m) => spectral_cutdown(m, &eps.0)?.to_string(),
                ConcreteElement::Pl(f) => f.cutdown(&eps.0)?.to_string(),
            },
        },
        ConcreteOp::Dtau { a, measure: m } => match env.concrete_element(a)? {
            ConcreteElement::Spectral(x) => value(spectral_dtau(x)),
            ConcreteElement::Pl(f) => value(pl_dtau(f, &measure(m)?)),
        },
        ConcreteOp::LayerCake { a, measure: m } => match env.concrete_element(a)? {
            ConcreteElement::Spectral(x) => {
                let n = nbar();
                let tau = Functional::scaling(&n, Ext::Finite(Rational::new(1, x.dim() as i128)));
                value(layer_cake_trace(x, &tau)?)
            }
            ConcreteElement::Pl(f) => value(pl_layer_cake(f, &measure(m)?)),
        },
        ConcreteOp::Rordam { a, b, eps } => match pair(env, a, b)? {
            (ConcreteElement::Pl(f), ConcreteElement::Pl(g)) => {
                value(rordam_witness(f, g, &eps.0)?)
            }
            _ => {
                return Err(CliError::validation(
                    a,
                    "the cutdown witness needs PL functions",
                ))
            }
        },
        ConcreteOp::Sample { model, count } => sample(env, model, *count)?,
    })
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    Rational::new(rng.gen_range(0..=max * d) as i128, d as i128)
}

fn random_element(
    rng: &mut ChaCha8Rng,
    model: &str,
    max_den: i64,
) -> Result<ConcreteElement<i128>, CliError> {
    Ok(match model {
        "spectral" => {
            let dim = rng.gen_range(1..=6);
            let mut e: Vec<Rational> = (0..dim).map(|_| random_rational(rng, 2, max_den)).collect();
            for q in e.iter_mut() {
                if rng.gen_bool(0.3) {
                    *q = Rational::from_integer(0);
                }
            }
            ConcreteElement::Spectral(SpectralElement::new(e)?)
        }
        "pl" => {
            let den = 6;
            let mut bp = vec![Rational::from_integer(0)];
            let mut vals = vec![Rational::from_integer(0)];
            for i in 1..den {
                if rng.gen_bool(0.5) {
                    bp.push(Rational::new(i as i128, den as i128));
                    vals.push(if rng.gen_bool(0.3) {
                        Rational::from_integer(0)
                    } else {
                        random_rational(rng, 1, max_den)
                    });
                }
            }
            bp.push(Rational::from_integer(1));
            vals.push(Rational::from_integer(0));
            ConcreteElement::Pl(PLFunction::new(bp, vals)?)
        }
        _ => {
            return Err(CliError::validation(
                model,
                "expected \"spectral\" or \"pl\"",
            ))
        }
    })
}

/// Draws `count` pairs and checks that the class map reflects and preserves the order.
fn sample(env: &Env, model: &str, count: usize) -> Result<Outcome, CliError> {
    let seed = env
        .settings
        .seed
        .ok_or_else(|| CliError::validation("seed", "sampling needs a seed"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = None;
    for _ in 0..count {
        let x = random_element(&mut rng, model, env.settings.max_den)?;
        let y = random_element(&mut rng, model, env.settings.max_den)?;
        let t = target(&x);
        let (cx, cy) = (to_cuntz_class(&x, &t)?, to_cuntz_class(&y, &t)?);
        if cuntz_leq(&x, &y) != t.leq(&cx, &cy)? {
            bad = Some((x, y));
            break;
        }
    }
    let text = |c: &ConcreteElement<i128>| match c {
        ConcreteElement::Spectral(a) => a.to_string(),
        ConcreteElement::Pl(f) => f.to_string(),
    };
    let mut c = Check::expect(
        format!("order embedding on {count} {model} pairs (seed {seed})"),
        bad.is_none(),
    );
    if let Some((x, y)) = bad {
        c = c.with_witness(vec![("x".into(), text(&x)), ("y".into(), text(&y))]);
    }
    Ok(Outcome::Checks { checks: vec![c] })
}
