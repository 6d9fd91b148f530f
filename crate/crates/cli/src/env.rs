//! Declarations resolved into live semigroups, elements and maps.

use std::collections::{HashMap, HashSet};

use cuntz::axioms::{glued_chain3, Fragment};
use cuntz::catalog::{
    adjoin_group, gap_model, make_catalog, make_dimension_drop, make_finite_table,
    make_lsc_interval, make_zstable_model, CatalogKind, FiniteTable, GroupTag,
};
use cuntz::concrete::{ConcreteElement, PLFunction, SpectralElement};
use cuntz::constructions::{
    cu_product, direct_limit, gamma_completion, ideal_generated, quotient, seq_product_nbar,
    tau_completion, ultraproduct, AuxRel, Morphism, MorphismAction, Ultrafilter, WSemigroup,
};
use cuntz::functionals::{Form, Functional};
use cuntz::{CuError, Elem, Grid, Semigroup};

use crate::document::{
    ActionSpec, Document, ElementDecl, FormSpec, FragmentDecl, FunctionalDecl, MorphismDecl,
    SemigroupDecl, SemigroupSpec, Settings, WSpec,
};
use crate::error::CliError;

#[derive(Clone, Debug)]
pub enum Bound {
    Abstract(Semigroup, Elem),
    Concrete(ConcreteElement<i128>),
}

pub struct Env {
    pub settings: Settings,
    sg_decls: HashMap<String, SemigroupDecl>,
    mo_decls: HashMap<String, MorphismDecl>,
    fn_decls: HashMap<String, FunctionalDecl>,
    semigroups: HashMap<String, Semigroup>,
    morphisms: HashMap<String, Morphism<i128>>,
    functionals: HashMap<String, Functional<i128>>,
    elements: HashMap<String, Bound>,
    fragments: HashMap<String, (Semigroup, Fragment<i128>)>,
    building: HashSet<String>,
}

fn invalid(name: &str) -> impl Fn(CuError) -> CliError + '_ {
    move |e| CliError::validation(name, e.to_string())
}

fn relation(name: &str, r: &str) -> Result<AuxRel, CliError> {
    match r {
        "leq" => Ok(AuxRel::Leq),
        "finite_leq" => Ok(AuxRel::FiniteLeq),
        "way_below" => Ok(AuxRel::WayBelow),
        _ => Err(CliError::validation(
            name,
            format!("unknown relation {r:?}"),
        )),
    }
}

fn group_tag(name: &str, g: &str) -> Result<GroupTag, CliError> {
    let bad = || CliError::validation(name, format!("unknown group {g:?}"));
    match g.split_once(':') {
        None if g == "trivial" => Ok(GroupTag::trivial()),
        Some(("cyclic", n)) => Ok(GroupTag::cyclic(n.parse().map_err(|_| bad())?)),
        Some(("free", r)) => Ok(GroupTag::free(r.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn table(
    name: &str,
    preset: &Option<String>,
    names: &Option<Vec<String>>,
    add: &Option<Vec<Vec<usize>>>,
    leq: &Option<Vec<Vec<bool>>>,
) -> Result<FiniteTable, CliError> {
    match (preset.as_deref(), names, add, leq) {
        (Some("zero_infinity"), None, None, None) => Ok(FiniteTable::zero_infinity()),
        (Some("zero_one_infinity"), None, None, None) => Ok(FiniteTable::zero_one_infinity()),
        (Some("trivial"), None, None, None) => Ok(FiniteTable::trivial()),
        (None, Some(n), Some(a), Some(l)) => {
            let refs: Vec<&str> = n.iter().map(String::as_str).collect();
            Ok(FiniteTable::new(&refs, a.clone(), l.clone()))
        }
        _ => Err(CliError::validation(
            name,
            "give a known preset or all of names, add and leq",
        )),
    }
}

impl Env {
    /// Builds every declaration; the first failure is reported.
    pub fn load(doc: &Document) -> Result<Env, CliError> {
        doc.validate()?;
        let mut env = Env {
            settings: doc.settings.clone(),
            sg_decls: doc
                .semigroups
                .iter()
                .map(|d| (d.name.clone(), d.clone()))
                .collect(),
            mo_decls: doc
                .morphisms
                .iter()
                .map(|d| (d.name.clone(), d.clone()))
                .collect(),
            fn_decls: doc
                .functionals
                .iter()
                .map(|d| (d.name.clone(), d.clone()))
                .collect(),
            semigroups: HashMap::new(),
            morphisms: HashMap::new(),
            functionals: HashMap::new(),
            elements: HashMap::new(),
            fragments: HashMap::new(),
            building: HashSet::new(),
        };
        for d in &doc.semigroups {
            env.resolve_semigroup(&d.name)?;
        }
        for d in &doc.morphisms {
            env.resolve_morphism(&d.name)?;
        }
        for d in &doc.elements {
            env.build_element(d)?;
        }
        for d in &doc.functionals {
            env.resolve_functional(&d.name)?;
        }
        for d in &doc.fragments {
            env.build_fragment(d)?;
        }
        Ok(env)
    }

    fn enter(&mut self, name: &str) -> Result<(), CliError> {
        if !self.building.insert(name.to_string()) {
            return Err(CliError::validation(name, "declaration refers to itself"));
        }
        Ok(())
    }

    pub fn semigroup(&self, name: &str) -> Result<&Semigroup, CliError> {
        self.semigroups
            .get(name)
            .ok_or_else(|| CliError::validation(name, "undeclared semigroup"))
    }

    pub fn morphism(&self, name: &str) -> Result<&Morphism<i128>, CliError> {
        self.morphisms
            .get(name)
            .ok_or_else(|| CliError::validation(name, "undeclared morphism"))
    }

    pub fn functional(&self, name: &str) -> Result<&Functional<i128>, CliError> {
        self.functionals
            .get(name)
            .ok_or_else(|| CliError::validation(name, "undeclared functional"))
    }

    pub fn element(&self, name: &str) -> Result<&Bound, CliError> {
        self.elements
            .get(name)
            .ok_or_else(|| CliError::validation(name, "undeclared element"))
    }

    pub fn abstract_element(&self, name: &str) -> Result<(&Semigroup, &Elem), CliError> {
        match self.element(name)? {
            Bound::Abstract(s, e) => Ok((s, e)),
            Bound::Concrete(_) => Err(CliError::validation(
                name,
                "expected an element of a semigroup",
            )),
        }
    }

    pub fn concrete_element(&self, name: &str) -> Result<&ConcreteElement<i128>, CliError> {
        match self.element(name)? {
            Bound::Concrete(c) => Ok(c),
            Bound::Abstract(..) => Err(CliError::validation(
                name,
                "expected a spec[...] or pl[...] element",
            )),
        }
    }

    pub fn fragment(&self, name: &str) -> Result<&(Semigroup, Fragment<i128>), CliError> {
        self.fragments
            .get(name)
            .ok_or_else(|| CliError::validation(name, "undeclared fragment"))
    }

    fn resolve_semigroup(&mut self, name: &str) -> Result<Semigroup, CliError> {
        if let Some(s) = self.semigroups.get(name) {
            return Ok(s.clone());
        }
        let decl = self
            .sg_decls
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::validation(name, "undeclared semigroup"))?;
        self.enter(name)?;
        let s = self.build_semigroup(name, &decl.spec)?;
        self.building.remove(name);
        self.semigroups.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn resolve_all(&mut self, names: &[String]) -> Result<Vec<Semigroup>, CliError> {
        names.iter().map(|n| self.resolve_semigroup(n)).collect()
    }

    fn build_semigroup(&mut self, name: &str, spec: &SemigroupSpec) -> Result<Semigroup, CliError> {
        let e = invalid(name);
        Ok(match spec {
            SemigroupSpec::Nbar { m } => {
                make_catalog(CatalogKind::NBar, m.unwrap_or(1)).map_err(e)?
            }
            SemigroupSpec::Softened { m } => make_catalog(CatalogKind::Softened, *m).map_err(e)?,
            SemigroupSpec::DimensionDrop => make_dimension_drop(),
            SemigroupSpec::Gap => gap_model(),
            SemigroupSpec::GluedChain3 => glued_chain3(),
            SemigroupSpec::SeqProductNbar => seq_product_nbar(),
            SemigroupSpec::Table {
                preset,
                names,
                add,
                leq,
            } => make_finite_table(table(name, preset, names, add, leq)?).map_err(e)?,
            SemigroupSpec::Zstable { pairing } => {
                let rows: Vec<Vec<_>> = pairing
                    .iter()
                    .map(|r| r.iter().map(|q| q.0).collect())
                    .collect();
                let k = rows.first().map_or(0, Vec::len);
                make_zstable_model(rows.len(), k, rows).map_err(e)?
            }
            SemigroupSpec::LscInterval {
                target,
                left,
                right,
            } => {
                let t = self.resolve_semigroup(target)?;
                let l = left
                    .as_ref()
                    .map(|n| self.resolve_semigroup(n))
                    .transpose()?;
                let r = right
                    .as_ref()
                    .map(|n| self.resolve_semigroup(n))
                    .transpose()?;
                make_lsc_interval(t, l, r).map_err(e)?
            }
            SemigroupSpec::AdjoinGroup { base, group } => {
                let b = self.resolve_semigroup(base)?;
                adjoin_group(b, group_tag(name, group)?).map_err(e)?
            }
            SemigroupSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(CliError::validation(
                        name,
                        "a product needs at least one factor",
                    ));
                }
                cu_product(self.resolve_all(factors)?)
            }
            SemigroupSpec::Quotient { of, generator } => {
                let base = self.resolve_semigroup(of)?;
                let g = base.parse(generator).map_err(&e)?;
                let ideal = ideal_generated(&base, &g).map_err(&e)?;
                quotient(&base, &ideal).map_err(e)?
            }
            SemigroupSpec::Ultraproduct { factors, sets } => {
                let fs = self.resolve_all(factors)?;
                let mut masks = Vec::new();
                for set in sets {
                    let mut m = 0u32;
                    for &i in set {
                        if i >= fs.len() || i >= 32 {
                            return Err(CliError::validation(
                                name,
                                format!("index {i} out of range"),
                            ));
                        }
                        m |= 1 << i;
                    }
                    masks.push(m);
                }
                let u = Ultrafilter::new(fs.len(), &masks).map_err(&e)?;
                ultraproduct(fs, &u).map_err(e)?
            }
            SemigroupSpec::Gamma { w } => gamma_completion(self.w_semigroup(name, w)?),
            SemigroupSpec::Tau { w } => tau_completion(self.w_semigroup(name, w)?),
            SemigroupSpec::Limit { stages, maps } => {
                let st = self.resolve_all(stages)?;
                let ms = maps
                    .iter()
                    .map(|m| self.resolve_morphism(m))
                    .collect::<Result<Vec<_>, _>>()?;
                direct_limit(&st, &ms).map_err(e)?
            }
        })
    }

    fn w_semigroup(&self, name: &str, w: &WSpec) -> Result<WSemigroup<i128>, CliError> {
        WSemigroup::scalars(w.m, w.top, relation(name, &w.relation)?).map_err(invalid(name))
    }

    fn resolve_morphism(&mut self, name: &str) -> Result<Morphism<i128>, CliError> {
        if let Some(m) = self.morphisms.get(name) {
            return Ok(m.clone());
        }
        let d = self
            .mo_decls
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::validation(name, "undeclared morphism"))?;
        self.enter(name)?;
        let dom = self.resolve_semigroup(&d.domain)?;
        let cod = self.resolve_semigroup(&d.codomain)?;
        let action = match &d.action {
            ActionSpec::Scale { factor } => MorphismAction::Scale(*factor),
            ActionSpec::Identity => MorphismAction::Identity,
            ActionSpec::Coordinate { index } => MorphismAction::Coordinate(*index),
            ActionSpec::Integration => MorphismAction::Integration,
            ActionSpec::Table { rows } => MorphismAction::Table(rows.clone()),
        };
        let m = Morphism::new(dom, cod, action).map_err(invalid(name))?;
        self.building.remove(name);
        self.morphisms.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn build_element(&mut self, d: &ElementDecl) -> Result<(), CliError> {
        let e = invalid(&d.name);
        let b = match &d.semigroup {
            Some(s) => {
                let s = self.semigroup(s)?.clone();
                let x = s.parse(&d.value).map_err(e)?;
                Bound::Abstract(s, x)
            }
            None => {
                let t = d.value.trim_start();
                if t.starts_with("spec") {
                    Bound::Concrete(ConcreteElement::Spectral(
                        SpectralElement::parse(t).map_err(e)?,
                    ))
                } else if t.starts_with("pl") {
                    Bound::Concrete(ConcreteElement::Pl(PLFunction::parse(t).map_err(e)?))
                } else {
                    return Err(CliError::validation(
                        &d.name,
                        "elements without \"in\" must be spec[...] or pl[...]",
                    ));
                }
            }
        };
        self.elements.insert(d.name.clone(), b);
        Ok(())
    }

    fn resolve_functional(&mut self, name: &str) -> Result<Functional<i128>, CliError> {
        if let Some(f) = self.functionals.get(name) {
            return Ok(f.clone());
        }
        let d = self
            .fn_decls
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::validation(name, "undeclared functional"))?;
        self.enter(name)?;
        let s = self.semigroup(&d.on)?.clone();
        let ext = |v: &[crate::document::X]| v.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        let form = match &d.form {
            FormSpec::Scaling { value } => Form::Scaling(value.0.clone()),
            FormSpec::Zero => Form::Zero,
            FormSpec::InfinityOnNonzero => Form::InfinityOnNonzero,
            FormSpec::TableValues { values } => Form::TableValues(ext(values)),
            FormSpec::VertexWeights { weights } => Form::VertexWeights(ext(weights)),
            FormSpec::Coordinates { parts } => Form::Coordinates(
                parts
                    .iter()
                    .map(|p| self.resolve_functional(p))
                    .collect::<Result<_, _>>()?,
            ),
        };
        let f = Functional::new(&s, form);
        self.building.remove(name);
        self.functionals.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn build_fragment(&mut self, d: &FragmentDecl) -> Result<(), CliError> {
        let s = self.semigroup(&d.semigroup)?.clone();
        let e = invalid(&d.name);
        let frag = match (&d.generators, &d.grid) {
            (Some(g), None) => {
                let gens = g
                    .iter()
                    .map(|t| s.parse(t))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(&e)?;
                Fragment::generate(&s, gens, d.depth.unwrap_or(self.settings.depth)).map_err(e)?
            }
            (None, Some(g)) => {
                let den = g.max_den.unwrap_or(self.settings.max_den);
                if g.max_value < 0 || den < 1 {
                    return Err(CliError::validation(
                        &d.name,
                        "grid bounds must be positive",
                    ));
                }
                Fragment::grid(&s, &Grid::new(g.max_value, den))
            }
            (None, None) => Fragment::default_for(&s),
            (Some(_), Some(_)) => {
                return Err(CliError::validation(
                    &d.name,
                    "give generators or a grid, not both",
                ))
            }
        };
        if frag.is_empty() {
            return Err(CliError::validation(&d.name, "empty fragment"));
        }
        self.fragments.insert(d.name.clone(), (s, frag));
        Ok(())
    }
}
