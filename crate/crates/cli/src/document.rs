//! The JSON document model: declarations plus an ordered list of queries.

use std::collections::HashSet;
use std::fmt;

use cuntz::scalar::{fmt_rational, parse_rational};
use cuntz::{Ext, Rational};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

pub const VERSION: u32 = 1;

/// An exact rational written as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

/// An element of `[0, ∞]` written as `"p/q"` or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X(pub Ext);

struct StrVisitor(&'static str);

impl Visitor<'_> for StrVisitor {
    type Value = String;
    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
    fn visit_str<E: de::Error>(self, v: &str) -> Result<String, E> {
        Ok(v.to_string())
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = d.deserialize_str(StrVisitor("a rational string \"p/q\""))?;
        parse_rational(&t).map(Q).map_err(de::Error::custom)
    }
}

impl Serialize for X {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for X {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = d.deserialize_str(StrVisitor("\"p/q\" or \"inf\""))?;
        Ext::parse(&t).map(X).map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Settings::is_default")]
    pub settings: Settings,
    #[serde(default)]
    pub semigroups: Vec<SemigroupDecl>,
    #[serde(default)]
    pub elements: Vec<ElementDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functionals: Vec<FunctionalDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fragments: Vec<FragmentDecl>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

/// Search bounds shared by all queries of a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    /// Closure depth for fragments given by generators.
    pub depth: usize,
    /// Largest denominator of generated grids.
    pub max_den: i64,
    /// Largest multiplier tried by almost unperforation.
    pub n_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            depth: 4,
            max_den: 16,
            n_max: 12,
            seed: None,
        }
    }
}

impl Settings {
    fn is_default(&self) -> bool {
        *self == Settings::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupDecl {
    pub name: String,
    #[serde(flatten)]
    pub spec: SemigroupSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemigroupSpec {
    /// `N̄` or, for `m > 1`, the chain `N[1/m] ∪ {∞}`.
    Nbar {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u64>,
    },
    Softened {
        m: u64,
    },
    DimensionDrop,
    Gap,
    GluedChain3,
    SeqProductNbar,
    /// `{0,∞}`, `{0,1,∞}` or `{0}`, or an explicit table.
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        add: Option<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        leq: Option<Vec<Vec<bool>>>,
    },
    /// Rows are generators, columns are vertices.
    Zstable {
        pairing: Vec<Vec<Q>>,
    },
    LscInterval {
        target: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        right: Option<String>,
    },
    /// `"trivial"`, `"cyclic:n"` or `"free:r"`.
    AdjoinGroup {
        base: String,
        group: String,
    },
    Product {
        factors: Vec<String>,
    },
    /// Quotient by the ideal generated by one element of `of`.
    Quotient {
        of: String,
        generator: String,
    },
    /// The ultrafilter generated by the listed index sets.
    Ultraproduct {
        factors: Vec<String>,
        sets: Vec<Vec<usize>>,
    },
    Gamma {
        #[serde(flatten)]
        w: WSpec,
    },
    Tau {
        #[serde(flatten)]
        w: WSpec,
    },
    Limit {
        stages: Vec<String>,
        maps: Vec<String>,
    },
}

/// `N[1/m]` (all rationals for `m = 0`), optionally with `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WSpec {
    pub m: u64,
    #[serde(default)]
    pub top: bool,
    /// `leq`, `finite_leq` or `way_below`.
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDecl {
    pub name: String,
    /// The semigroup, or absent for `spec[...]` and `pl[...]` elements.
    #[serde(rename = "in", default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalDecl {
    pub name: String,
    pub on: String,
    #[serde(flatten)]
    pub form: FormSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum FormSpec {
    Scaling {
        value: X,
    },
    Zero,
    InfinityOnNonzero,
    TableValues {
        values: Vec<X>,
    },
    VertexWeights {
        weights: Vec<X>,
    },
    /// One declared functional per factor of a product.
    Coordinates {
        parts: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDecl {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    #[serde(flatten)]
    pub action: ActionSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum ActionSpec {
    Scale { factor: u64 },
    Identity,
    Coordinate { index: usize },
    Integration,
    Table { rows: Vec<usize> },
}

/// Generators closed under addition to `depth`, a grid, or the default fragment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentDecl {
    pub name: String,
    #[serde(rename = "in")]
    pub semigroup: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub max_value: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_den: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Query {
    Compare {
        op: CompareOp,
        a: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<String>,
    },
    Axioms {
        semigroup: String,
        /// Defaults to O1 through O6, O6+, WC and Riesz.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        axioms: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fragment: Option<String>,
        /// Needed by strict comparison.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        functionals: Vec<String>,
    },
    Construct {
        #[serde(flatten)]
        op: ConstructOp,
    },
    Functionals {
        #[serde(flatten)]
        op: FunctionalOp,
    },
    Concrete {
        #[serde(flatten)]
        op: ConcreteOp,
    },
    Demo {
        name: String,
    },
}

impl Query {
    pub fn command(&self) -> &'static str {
        match self {
            Query::Compare { .. } => "compare",
            Query::Axioms { .. } => "axioms",
            Query::Construct { .. } => "construct",
            Query::Functionals { .. } => "functionals",
            Query::Concrete { .. } => "concrete",
            Query::Demo { .. } => "demo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareOp {
    Leq,
    WayBelow,
    Equal,
    Add,
    Wedge,
    Compact,
    Infinity,
}

impl CompareOp {
    pub fn binary(self) -> bool {
        !matches!(self, CompareOp::Compact | CompareOp::Infinity)
    }
}

/// A sequence `b, b + s, b + 2s, ...` or a constant one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ConstructOp {
    Label {
        semigroup: String,
    },
    Grid {
        semigroup: String,
        max_value: i64,
    },
    /// Supremum of a sequence of element texts in `semigroup`.
    Sup {
        semigroup: String,
        sequence: SequenceSpec,
    },
    /// Image of a base element in a declared quotient or ultraproduct.
    Class {
        semigroup: String,
        element: String,
    },
    Apply {
        morphism: String,
        element: String,
    },
    IdealContains {
        generator: String,
        element: String,
    },
    /// Riesz interpolation of the Grothendieck group on a box.
    Interpolation {
        semigroup: String,
        radius: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_den: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fragment: Option<String>,
    },
    InScale {
        element: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum FunctionalOp {
    Evaluate {
        functional: String,
        element: String,
    },
    Rank {
        element: String,
    },
    /// `α` of the rank function `t ↦ slope · t`.
    Realize {
        semigroup: String,
        slope: X,
    },
    Space {
        semigroup: String,
    },
    Normalized {
        semigroup: String,
        at: String,
    },
    DetectElementary {
        semigroup: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default = "zero_q")]
    pub lebesgue: Q,
    /// `[point, mass]` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<(Q, Q)>,
}

fn zero_q() -> Q {
    Q(Rational::from_integer(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ConcreteOp {
    Leq {
        a: String,
        b: String,
    },
    WayBelow {
        a: String,
        b: String,
    },
    Class {
        a: String,
    },
    Cutdown {
        a: String,
        eps: Q,
    },
    /// `d_τ`: normalized trace for matrices, `μ(supp)` for PL functions.
    Dtau {
        a: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        measure: Option<MeasureSpec>,
    },
    LayerCake {
        a: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        measure: Option<MeasureSpec>,
    },
    Rordam {
        a: String,
        b: String,
        eps: Q,
    },
    /// Random pairs checked for `x ≼ y ⇔ [x] ≤ [y]`; needs a seed.
    Sample {
        model: String,
        count: usize,
    },
}

fn parse_error(e: &serde_json::Error) -> CliError {
    CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| parse_error(&e))?;
    doc.validate()?;
    Ok(doc)
}

pub fn serialize_document(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

impl Document {
    pub fn empty() -> Self {
        Document {
            version: VERSION,
            settings: Settings::default(),
            semigroups: vec![],
            elements: vec![],
            functionals: vec![],
            morphisms: vec![],
            fragments: vec![],
            queries: vec![],
        }
    }

    /// Version, bounds and name uniqueness. References are resolved when the document is built.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.version != VERSION {
            return Err(CliError::validation(
                "version",
                format!("expected {VERSION}, found {}", self.version),
            ));
        }
        if self.settings.depth == 0 || self.settings.max_den < 1 || self.settings.n_max == 0 {
            return Err(CliError::validation(
                "settings",
                "depth, max_den and n_max must be positive",
            ));
        }
        let mut seen = HashSet::new();
        let names = self
            .semigroups
            .iter()
            .map(|d| &d.name)
            .chain(self.elements.iter().map(|d| &d.name))
            .chain(self.functionals.iter().map(|d| &d.name))
            .chain(self.morphisms.iter().map(|d| &d.name))
            .chain(self.fragments.iter().map(|d| &d.name));
        for n in names {
            if n.is_empty() {
                return Err(CliError::validation(n, "names must be nonempty"));
            }
            if !seen.insert(n) {
                return Err(CliError::validation(n, "declared twice"));
            }
        }
        Ok(())
    }
}
