//! Sessions: a domain, named bindings and a command interpreter.

use std::collections::BTreeMap;
use std::sync::Arc;

use hullforge_core::boolalg::{bump, complement_witness, orthogonal, principal_polar, vm_sm, RcSet};
use hullforge_core::curvetrace::{cover_gap, CoverGap, TraceElement};
use hullforge_core::freudenthal::{approximate, level_regions, sup_error};
use hullforge_core::geometry::{sign_string, Domain, Halfspace};
use hullforge_core::hull::{
    component_multipliers, component_product, essential_witness, hull_morphism, hull_morphism_direct,
    polar_split, HullElement, MorphismSpec,
};
use hullforge_core::plfun::PlFunction;
use hullforge_core::scalar::fmt_exact;
use hullforge_core::term::parse_term;
use hullforge_core::{Q, Scalar};
use num_traits::Signed;
use serde::Deserialize;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::fields;
use crate::report::{Format, Fragment, SessionReport};

type Fields = BTreeMap<String, Json>;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("unknown command '{0}'")]
    UnknownCommand(String),
    #[error("unknown name '{0}'")]
    UnknownName(String),
    #[error("'{name}' is a {found}, expected a {expected}")]
    WrongKind {
        name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("{command} takes {expected} argument(s), got {found}")]
    Arity {
        command: String,
        expected: &'static str,
        found: usize,
    },
    #[error("invalid name '{0}'")]
    InvalidName(String),
    #[error("invalid number '{0}'")]
    InvalidNumber(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hullforge_core::Error),
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("cannot read session: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed session JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid domain: {0}")]
    Domain(String),
}

#[derive(Debug, Clone)]
pub enum Binding {
    Function(PlFunction<Q>),
    Hull(HullElement<Q>),
}

impl Binding {
    fn kind(&self) -> &'static str {
        match self {
            Binding::Function(_) => "function",
            Binding::Hull(_) => "hull element",
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct DomainSpec {
    pub dim: usize,
    /// Rows `[a_1, …, a_d, b]` for `a·x <= b`; entries are integers or
    /// strings `"p/q"`.
    pub ineqs: Vec<Vec<Json>>,
}

#[derive(Debug, Deserialize)]
pub struct SessionFile {
    pub domain: DomainSpec,
    pub commands: Vec<String>,
}

impl DomainSpec {
    pub fn build(&self) -> Result<Arc<Domain<Q>>, SessionError> {
        let mut rows = Vec::new();
        for row in &self.ineqs {
            if row.len() != self.dim + 1 {
                return Err(SessionError::Domain(format!(
                    "row has {} entries, expected {}",
                    row.len(),
                    self.dim + 1
                )));
            }
            let values = row
                .iter()
                .map(json_number)
                .collect::<Result<Vec<Q>, _>>()
                .map_err(|e| SessionError::Domain(e.to_string()))?;
            let (normal, bound) = values.split_at(self.dim);
            rows.push(Halfspace::new(normal.to_vec(), bound[0].clone()));
        }
        Domain::new(self.dim, rows).map_err(|e| SessionError::Domain(e.to_string()))
    }
}

fn json_number(v: &Json) -> Result<Q, CommandError> {
    match v {
        Json::Number(n) if n.is_i64() => Ok(Q::from_int(n.as_i64().expect("checked"))),
        Json::String(s) => parse_number(s),
        other => Err(CommandError::InvalidNumber(other.to_string())),
    }
}

fn parse_number(s: &str) -> Result<Q, CommandError> {
    Q::parse_decimal(s.trim()).ok_or_else(|| CommandError::InvalidNumber(s.to_string()))
}

/// The domain as it appears in reports.
pub fn domain_json(domain: &Domain<Q>) -> Json {
    let ineqs: Vec<String> = domain.inequalities().iter().map(|h| h.to_string()).collect();
    json!({ "dim": domain.dim(), "ineqs": ineqs })
}

fn points(p: &[Q]) -> Vec<String> {
    p.iter().map(fmt_exact).collect()
}

fn region_json(r: &RcSet<Q>) -> Json {
    let cells: Vec<String> = r.sign_vectors().iter().map(|s| sign_string(s)).collect();
    json!({ "set": r.to_string(), "cells": cells, "hyperplanes": r.arrangement().hyperplanes().len() })
}

fn gap_json(gap: &CoverGap) -> Json {
    let mut m = BTreeMap::new();
    for (b, d, set) in gap.slots() {
        m.insert(format!("{}{}", b.name(), d.symbol()), set.to_string());
    }
    json!(m)
}

fn trace_json(t: &TraceElement) -> Fields {
    use hullforge_core::curvetrace::{Branch, Dir};
    let mut germs = BTreeMap::new();
    for b in [Branch::Par, Branch::Seg] {
        for d in [Dir::Plus, Dir::Minus] {
            germs.insert(format!("{}{}", b.name(), d.symbol()), t.germ_support(b, d).to_string());
        }
    }
    fields! {
        "par" => t.par().to_string(),
        "seg" => t.seg().to_string(),
        "germ_support" => germs,
        "vanishes_on_parabola_germ" => t.vanishes_on_parabola_germ(),
        "segment_flat_radius" => t.segment_flat_radius().map(|r| fmt_exact(&r)),
    }
}

fn is_unit_square(domain: &Domain<Q>) -> bool {
    let zero_one = |x: &Q| *x == Q::from_int(0) || *x == Q::from_int(1);
    let vertices: Vec<&Vec<Q>> = domain.polytope().vertex_points().collect();
    domain.dim() == 2 && vertices.len() == 4 && vertices.iter().all(|v| v.iter().all(zero_one))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub struct Session {
    domain: Arc<Domain<Q>>,
    names: BTreeMap<String, Binding>,
}

impl Session {
    pub fn new(domain: Arc<Domain<Q>>) -> Self {
        Session {
            domain,
            names: BTreeMap::new(),
        }
    }

    pub fn domain(&self) -> &Arc<Domain<Q>> {
        &self.domain
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.names.get(name)
    }

    /// Runs one command. Failures are reported in the fragment and leave
    /// the bindings untouched.
    pub fn run_command(&mut self, line: &str) -> Fragment {
        let line = line.trim();
        match self.dispatch(line) {
            Ok(fields) => Fragment::ok(line, fields),
            Err(CommandError::Core(hullforge_core::Error::VerificationFailed(what))) => {
                let mut f = Fragment::ok(line, fields! { "verified" => false });
                f.error = Some(format!("verification failed: {what}"));
                f
            }
            Err(e) => Fragment::error(line, e.to_string()),
        }
    }

    fn function(&self, name: &str) -> Result<&PlFunction<Q>, CommandError> {
        match self.names.get(name) {
            Some(Binding::Function(f)) => Ok(f),
            Some(other) => Err(CommandError::WrongKind {
                name: name.into(),
                expected: "function",
                found: other.kind(),
            }),
            None => Err(CommandError::UnknownName(name.into())),
        }
    }

    /// A hull element by name; functions are embedded.
    fn hull(&self, name: &str) -> Result<HullElement<Q>, CommandError> {
        match self.names.get(name) {
            Some(Binding::Hull(e)) => Ok(e.clone()),
            Some(Binding::Function(f)) => Ok(HullElement::embed(f)),
            None => Err(CommandError::UnknownName(name.into())),
        }
    }

    fn dispatch(&mut self, line: &str) -> Result<Fields, CommandError> {
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let args: Vec<&str> = rest.split_whitespace().collect();
        let arity = |expected: &'static str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(CommandError::Arity {
                    command: head.to_string(),
                    expected,
                    found: args.len(),
                })
            }
        };
        match head {
            "let" => self.cmd_let(rest),
            "hull" => self.cmd_hull(rest),
            "eval" => {
                arity("1 + dim", args.len() == 1 + self.domain.dim())?;
                let p = args[1..].iter().map(|s| parse_number(s)).collect::<Result<Vec<_>, _>>()?;
                let value = match self.names.get(args[0]) {
                    Some(Binding::Function(f)) => f.evaluate(&p)?,
                    Some(Binding::Hull(e)) => e.evaluate(&p)?,
                    None => return Err(CommandError::UnknownName(args[0].into())),
                };
                Ok(fields! { "point" => points(&p), "value" => fmt_exact(&value) })
            }
            "equals" => {
                arity("2", args.len() == 2)?;
                let (f, g) = (self.function(args[0])?, self.function(args[1])?);
                Ok(fields! { "equal" => f.equals(g)? })
            }
            "dist" => {
                arity("2", args.len() == 2)?;
                let (f, g) = (self.function(args[0])?, self.function(args[1])?);
                let d = f.sup_distance(g)?;
                let at = (f.evaluate(&d.point)? - g.evaluate(&d.point)?).abs();
                Ok(fields! {
                    "distance" => fmt_exact(&d.value),
                    "point" => points(&d.point),
                    "cell" => sign_string(&d.cell),
                    "verified" => at == d.value,
                })
            }
            "cells" => {
                arity("1", args.len() == 1)?;
                let f = self.function(args[0])?;
                let hyperplanes: Vec<String> =
                    f.arrangement().hyperplanes().iter().map(|h| h.to_string()).collect();
                let cells: Vec<String> = f.pieces().into_iter().map(|(s, form)| format!("[{s}] {form}")).collect();
                Ok(fields! { "hyperplanes" => hyperplanes, "cells" => cells })
            }
            "polar" => {
                arity("1", args.len() == 1)?;
                let f = self.function(args[0])?;
                let (s, v) = vm_sm(f);
                let verified = s.join(&v)?.is_full() && s.meet(&v)?.is_empty();
                Ok(fields! {
                    "support" => region_json(&s),
                    "zero_set" => region_json(&v),
                    "verified" => verified,
                })
            }
            "orth" => {
                arity("2", args.len() == 2)?;
                let (f, g) = (self.function(args[0])?, self.function(args[1])?);
                Ok(fields! { "orthogonal" => orthogonal(f, g)?, "verified" => true })
            }
            "bump" => {
                arity("1", args.len() == 1)?;
                let f = self.function(args[0])?;
                let region = principal_polar(f);
                let h = bump(&region)?;
                let (lo, hi) = h.extrema();
                let verified = principal_polar(&h).equals(&region)? && lo >= Q::from_int(0) && hi <= Q::from_int(1);
                Ok(fields! { "bump" => h.to_string(), "region" => region_json(&region), "verified" => verified })
            }
            "complement" => {
                arity("1", args.len() == 1)?;
                let g = self.function(args[0])?;
                let w = complement_witness(g)?;
                let (support_g, _) = vm_sm(g);
                let (_, zero_w) = vm_sm(&w);
                let verified = zero_w.equals(&support_g)?;
                Ok(fields! {
                    "witness" => w.to_string(),
                    "support" => region_json(&support_g),
                    "witness_support" => region_json(&principal_polar(&w)),
                    "complemented" => true,
                    "verified" => verified,
                })
            }
            "freudenthal" => {
                arity("2", args.len() == 2)?;
                let g = self.function(args[0])?;
                let n: i64 = args[1]
                    .parse()
                    .map_err(|_| CommandError::InvalidNumber(args[1].into()))?;
                let s = approximate(g, n)?;
                let (base, levels) = level_regions(g, n)?;
                let err = sup_error(g, &s)?;
                let bound = Q::from_int(1) / Q::from_int(n);
                Ok(fields! {
                    "step" => s.to_string(),
                    "base" => fmt_exact(&base),
                    "levels" => levels.len(),
                    "sup_error" => fmt_exact(&err.value),
                    "witness" => points(&err.point),
                    "bound" => fmt_exact(&bound),
                    "verified" => err.value <= bound,
                })
            }
            "restrict" => {
                arity("1", args.len() == 1)?;
                let t = self.trace(args[0])?;
                let term = self.function(args[0])?.term().cloned().expect("checked in trace");
                let algebraic = TraceElement::restrict_algebraic(&term)?;
                let mut out = trace_json(&t);
                out.insert("verified".into(), json!(algebraic.equals(&t)));
                Ok(out)
            }
            "cover" => {
                arity("at least 1", !args.is_empty())?;
                let family = args.iter().map(|a| self.trace(a)).collect::<Result<Vec<_>, _>>()?;
                let gap = cover_gap(&family)?;
                Ok(fields! { "gap" => gap_json(&gap), "covers" => gap.is_empty() })
            }
            "hull-show" => {
                arity("1", args.len() == 1)?;
                let e = self.hull(args[0])?;
                let pieces: Vec<Json> = e
                    .pieces()
                    .iter()
                    .map(|p| json!({ "region": p.region.to_string(), "value": p.value.to_string() }))
                    .collect();
                Ok(fields! {
                    "element" => e.to_string(),
                    "pieces" => pieces,
                    "support" => e.support().to_string(),
                    "nonnegative" => e.is_nonnegative(),
                    "positive" => e.is_positive(),
                    "component" => e.is_component(),
                })
            }
            "hull-eq" => {
                arity("2", args.len() == 2)?;
                let (e, f) = (self.hull(args[0])?, self.hull(args[1])?);
                Ok(fields! { "equal" => e.equals(&f)? })
            }
            "hull-split" => {
                arity("2", args.len() == 2)?;
                let (e, v) = (self.hull(args[0])?, self.hull(args[1])?);
                let s = polar_split(&e, &v)?;
                Ok(fields! {
                    "inside" => s.inside.to_string(),
                    "outside" => s.outside.to_string(),
                    "region" => s.region.to_string(),
                    "sums_back" => s.sums_back,
                    "outside_orthogonal" => s.outside_orthogonal,
                    "inside_supported" => s.inside_supported,
                    "verified" => s.verified(),
                })
            }
            "hull-witness" => {
                arity("1", args.len() == 1)?;
                let e = self.hull(args[0])?;
                let w = essential_witness(&e)?;
                Ok(fields! { "h" => w.h.to_string(), "n" => w.n, "piece" => w.piece, "verified" => w.verified })
            }
            "hull-decompose" => {
                arity("1", args.len() == 1)?;
                let e = self.hull(args[0])?;
                let mut rebuilt = HullElement::zero(&self.domain);
                let mut terms = Vec::new();
                for p in e.pieces() {
                    let chi = HullElement::char_elem(&p.region);
                    let (np, nn) = component_multipliers(&p.value, &chi)?;
                    rebuilt = rebuilt.add(&component_product(&p.value, &chi)?)?;
                    terms.push(json!({
                        "region": p.region.to_string(),
                        "value": p.value.to_string(),
                        "n_plus": np,
                        "n_minus": nn,
                    }));
                }
                Ok(fields! { "terms" => terms, "rebuilt" => rebuilt.to_string(), "verified" => rebuilt.equals(&e)? })
            }
            other => Err(CommandError::UnknownCommand(other.to_string())),
        }
    }

    fn trace(&self, name: &str) -> Result<TraceElement, CommandError> {
        if !is_unit_square(&self.domain) {
            return Err(CommandError::Usage("curve traces need the domain [0,1]^2".into()));
        }
        let term = self
            .function(name)?
            .term()
            .ok_or_else(|| CommandError::Usage(format!("'{name}' has no term to restrict")))?;
        Ok(TraceElement::restrict(term)?)
    }

    fn binding_target<'a>(&self, rest: &'a str) -> Result<(&'a str, &'a str), CommandError> {
        let (name, body) = rest
            .split_once('=')
            .ok_or_else(|| CommandError::Usage("expected NAME = ...".into()))?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(CommandError::InvalidName(name.into()));
        }
        Ok((name, body.trim()))
    }

    fn cmd_let(&mut self, rest: &str) -> Result<Fields, CommandError> {
        let (name, body) = self.binding_target(rest)?;
        let term = parse_term::<Q>(body).map_err(hullforge_core::Error::from)?;
        let f = PlFunction::compile(&term, &self.domain)?;
        let (lo, hi) = f.extrema();
        let out = fields! {
            "name" => name,
            "term" => term.normalize().to_string(),
            "cells" => f.forms().len(),
            "min" => fmt_exact(&lo),
            "max" => fmt_exact(&hi),
        };
        self.names.insert(name.to_string(), Binding::Function(f));
        Ok(out)
    }

    fn cmd_hull(&mut self, rest: &str) -> Result<Fields, CommandError> {
        let (name, body) = self.binding_target(rest)?;
        let parts: Vec<&str> = body.split_whitespace().collect();
        let (op, args) = parts
            .split_first()
            .ok_or_else(|| CommandError::Usage("expected an operation after '='".into()))?;
        let want = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(CommandError::Arity {
                    command: format!("hull {op}"),
                    expected: ["0", "1", "2"][n.min(2)],
                    found: args.len(),
                })
            }
        };
        let mut extra = Fields::new();
        let e = match *op {
            "embed" => {
                want(1)?;
                HullElement::embed(self.function(args[0])?)
            }
            "char" => {
                want(1)?;
                HullElement::char_elem(&principal_polar(self.function(args[0])?))
            }
            "cochar" => {
                want(1)?;
                self.hull(args[0])?.cochar()
            }
            "neg" => {
                want(1)?;
                self.hull(args[0])?.neg()
            }
            "abs" => {
                want(1)?;
                self.hull(args[0])?.abs()
            }
            "normalize" => {
                want(1)?;
                let e = self.hull(args[0])?;
                let n = e.normalize();
                extra.insert("verified".into(), json!(n.equals(&e)?));
                n
            }
            "add" | "sub" | "join" | "meet" => {
                want(2)?;
                let (a, b) = (self.hull(args[0])?, self.hull(args[1])?);
                match *op {
                    "add" => a.add(&b)?,
                    "sub" => a.sub(&b)?,
                    "join" => a.join(&b)?,
                    _ => a.meet(&b)?,
                }
            }
            "prod" => {
                want(2)?;
                let g = self.function(args[0])?;
                let chi = self.hull(args[1])?;
                component_product(g, &chi)?
            }
            "phi" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(CommandError::Arity {
                        command: "hull phi".into(),
                        expected: "1 or 2",
                        found: args.len(),
                    });
                }
                let e = self.hull(args[0])?;
                let spec = match args.get(1) {
                    Some(t) => MorphismSpec::new(self.function(t)?.arrangement().clone()),
                    None => MorphismSpec::identity(&self.domain),
                };
                let image = hull_morphism(&spec, &e)?;
                let direct = hull_morphism_direct(&spec, &e)?;
                extra.insert("verified".into(), json!(image.equals(&direct)?));
                image
            }
            other => return Err(CommandError::UnknownCommand(format!("hull {other}"))),
        };
        let mut out = fields! { "name" => name, "element" => e.to_string(), "pieces" => e.len() };
        out.append(&mut extra);
        self.names.insert(name.to_string(), Binding::Hull(e));
        Ok(out)
    }
}

/// Parses and runs a whole session file.
pub fn run_session(text: &str) -> Result<SessionReport, SessionError> {
    let file: SessionFile = serde_json::from_str(text)?;
    let domain = file.domain.build()?;
    let mut session = Session::new(domain.clone());
    let results = file.commands.iter().map(|c| session.run_command(c)).collect();
    Ok(SessionReport::new(domain_json(&domain), results))
}

pub fn run_session_file(path: &std::path::Path, format: Format) -> Result<(String, i32), SessionError> {
    let text = std::fs::read_to_string(path)?;
    let report = run_session(&text)?;
    Ok((report.render(format), report.summary.exit_code))
}
