use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{monomial_cmp, Monomial};
use crate::field::{fmt_scalar, int, is_negative, FieldTag, Scalar};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// A scalar, optionally multiplied by one symbolic parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCoeff {
    pub scalar: Scalar,
    pub param: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: ParamCoeff,
    pub monomial: Monomial,
}

/// A homogeneous polynomial set equal to zero. Terms are kept in canonical order:
/// descending monomial order, constant coefficient before parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct Presentation {
    pub field: FieldTag,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub conditions: Vec<String>,
    pub truncation: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PresentationJson {
    field: FieldTag,
    generators: Vec<Generator>,
    relations: Vec<String>,
    #[serde(default)]
    conditions: Vec<String>,
    truncation: u32,
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = Error;

    fn try_from(j: PresentationJson) -> Result<Self, Error> {
        let relations = j
            .relations
            .iter()
            .map(|s| parse_relation(j.field, &j.generators, s))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(j.field, j.generators, relations, j.conditions, j.truncation)
    }
}

impl From<Presentation> for PresentationJson {
    fn from(p: Presentation) -> Self {
        PresentationJson {
            field: p.field,
            relations: p.relations.iter().map(|r| p.render_relation(r)).collect(),
            generators: p.generators,
            conditions: p.conditions,
            truncation: p.truncation,
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(
        field: FieldTag,
        generators: Vec<Generator>,
        relations: Vec<Relation>,
        conditions: Vec<String>,
        truncation: u32,
    ) -> Result<Self, Error> {
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        let mut names = BTreeSet::new();
        for g in &generators {
            if g.degree == 0 {
                return bad(format!("generator `{}` has degree 0", g.name));
            }
            if !is_identifier(&g.name) || !names.insert(g.name.clone()) {
                return bad(format!("bad or duplicate generator name `{}`", g.name));
            }
        }
        let degrees: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let mut canon = Vec::new();
        for rel in relations {
            if rel.terms.iter().any(|t| t.monomial.0.len() != generators.len()) {
                return bad("relation monomial has the wrong number of exponents".into());
            }
            let rel = canonical_relation(field, &degrees, rel);
            let Some(lead) = rel.terms.first() else {
                return bad("relation reduces to 0".into());
            };
            let deg = lead.monomial.degree(&degrees);
            if rel.terms.iter().any(|t| t.monomial.degree(&degrees) != deg) {
                return bad("relation is not homogeneous".into());
            }
            if deg > truncation {
                return bad(format!("relation of degree {deg} exceeds truncation {truncation}"));
            }
            if rel.terms.iter().any(|t| t.monomial == lead.monomial && t.coeff.param.is_some()) {
                return bad("leading coefficient must be a nonzero constant".into());
            }
            for t in &rel.terms {
                if let Some(p) = &t.coeff.param {
                    if names.contains(p) || !is_identifier(p) {
                        return bad(format!("bad parameter name `{p}`"));
                    }
                }
            }
            canon.push(rel);
        }
        Ok(Presentation { field, generators, relations: canon, conditions, truncation })
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.relations
            .iter()
            .flat_map(|r| r.terms.iter().filter_map(|t| t.coeff.param.clone()))
            .collect()
    }

    pub fn parse_relation(&self, s: &str) -> Result<Relation, Error> {
        parse_relation(self.field, &self.generators, s)
    }

    pub fn render_relation(&self, rel: &Relation) -> String {
        let names = self.names();
        let mut out = String::new();
        for (i, t) in rel.terms.iter().enumerate() {
            let neg = is_negative(&t.coeff.scalar);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = if neg { -t.coeff.scalar.clone() } else { t.coeff.scalar.clone() };
            let mut parts = Vec::new();
            if !abs.is_one() {
                parts.push(fmt_scalar(&abs));
            }
            if let Some(p) = &t.coeff.param {
                parts.push(p.clone());
            }
            if !t.monomial.is_one() || parts.is_empty() {
                parts.push(t.monomial.render(&names));
            }
            out.push_str(&parts.join("*"));
        }
        out
    }

    /// Substitutes values for parameters; parameters without a value are kept.
    pub fn instantiate(&self, values: &BTreeMap<String, Scalar>) -> Result<Presentation, Error> {
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                terms: r
                    .terms
                    .iter()
                    .map(|t| match t.coeff.param.as_ref().and_then(|p| values.get(p)) {
                        Some(v) => Term {
                            coeff: ParamCoeff { scalar: self.field.mul(&t.coeff.scalar, v), param: None },
                            monomial: t.monomial.clone(),
                        },
                        None => t.clone(),
                    })
                    .collect(),
            })
            .collect();
        Presentation::new(self.field, self.generators.clone(), relations, self.conditions.clone(), self.truncation)
    }

    /// Quotient-ring rendering, e.g. `Z2[u,v]/<u^2, v^2>, deg u=4, deg v=5`.
    pub fn render(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| self.render_relation(r)).collect();
        let degs: Vec<String> = self.generators.iter().map(|g| format!("deg {}={}", g.name, g.degree)).collect();
        let mut s = format!("{}[{}]/<{}>, {}", self.field, self.names().join(","), rels.join(", "), degs.join(", "));
        if !self.conditions.is_empty() {
            s.push_str(&format!("; {}", self.conditions.join("; ")));
        }
        s
    }
}

pub(crate) fn canonical_relation(field: FieldTag, degrees: &[u32], rel: Relation) -> Relation {
    let mut acc: Vec<Term> = Vec::new();
    for t in rel.terms {
        let scalar = field.reduce(t.coeff.scalar);
        match acc.iter_mut().find(|a| a.monomial == t.monomial && a.coeff.param == t.coeff.param) {
            Some(a) => a.coeff.scalar = field.add(&a.coeff.scalar, &scalar),
            None => acc.push(Term { coeff: ParamCoeff { scalar, param: t.coeff.param }, monomial: t.monomial }),
        }
    }
    acc.retain(|t| !t.coeff.scalar.is_zero());
    acc.sort_by(|a, b| {
        monomial_cmp(&b.monomial, &a.monomial, degrees).then_with(|| a.coeff.param.cmp(&b.coeff.param))
    });
    // Over Q the relation is scaled so that its leading coefficient is 1.
    if let Some(lead) = acc.first().filter(|t| t.coeff.param.is_none()).map(|t| t.coeff.scalar.clone()) {
        if !lead.is_one() {
            let inv = field.inv(&lead);
            for t in &mut acc {
                t.coeff.scalar = field.mul(&t.coeff.scalar, &inv);
            }
        }
    }
    Relation { terms: acc }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().map_err(|_| Error::Parse(format!("bad integer `{text}`")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^·".contains(c) {
            out.push(Tok::Sym(if c == '·' { '*' } else { c }));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

/// Parses a polynomial such as `v^2 + alpha*u*v - 2*u^3`.
pub fn parse_relation(field: FieldTag, generators: &[Generator], s: &str) -> Result<Relation, Error> {
    let toks = lex(s)?;
    let err = |msg: &str| Error::Parse(format!("{msg} in `{s}`"));
    let n = generators.len();
    let mut terms = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() || first {
        let mut sign = int(1);
        match toks.get(i) {
            Some(Tok::Sym('-')) => {
                sign = int(-1);
                i += 1;
            }
            Some(Tok::Sym('+')) if !first => i += 1,
            _ if first => {}
            _ => return Err(err("expected + or -")),
        }
        first = false;
        let mut scalar = sign;
        let mut param: Option<String> = None;
        let mut mono = Monomial::one(n);
        loop {
            match toks.get(i) {
                Some(Tok::Int(a)) => {
                    i += 1;
                    let mut v = int(*a);
                    if let Some(Tok::Sym('/')) = toks.get(i) {
                        let Some(Tok::Int(b)) = toks.get(i + 1) else { return Err(err("expected denominator")) };
                        if *b == 0 {
                            return Err(err("zero denominator"));
                        }
                        v /= int(*b);
                        i += 2;
                    }
                    scalar *= v;
                }
                Some(Tok::Ident(name)) => {
                    i += 1;
                    let mut exp = 1u32;
                    if let Some(Tok::Sym('^')) = toks.get(i) {
                        let Some(Tok::Int(e)) = toks.get(i + 1) else { return Err(err("expected exponent")) };
                        exp = u32::try_from(*e).map_err(|_| err("bad exponent"))?;
                        i += 2;
                    }
                    match generators.iter().position(|g| &g.name == name) {
                        Some(gi) => mono.0[gi] += exp,
                        None => {
                            if param.is_some() || exp != 1 {
                                return Err(err("at most one parameter of degree 1 per term"));
                            }
                            param = Some(name.clone());
                        }
                    }
                }
                _ => return Err(err("expected a factor")),
            }
            if let Some(Tok::Sym('*')) = toks.get(i) {
                i += 1;
            } else {
                break;
            }
        }
        terms.push(Term { coeff: ParamCoeff { scalar: field.element(scalar)?, param }, monomial: mono });
    }
    Ok(Relation { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(du: u32, dv: u32) -> Vec<Generator> {
        vec![Generator { name: "u".into(), degree: du }, Generator { name: "v".into(), degree: dv }]
    }

    #[test]
    fn canonical_round_trip() {
        let gens = uv(4, 4);
        let rels = ["u^3", "v^2 - beta*u^2 - gamma*u*v", "u*v - alpha*u^2"]
            .iter()
            .map(|s| parse_relation(FieldTag::Q, &gens, s).unwrap())
            .collect();
        let p = Presentation::new(FieldTag::Q, gens, rels, vec![], 12).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: Presentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        assert_eq!(p.render_relation(&p.relations[1]), "v^2 - gamma*u*v - beta*u^2");
    }

    #[test]
    fn z2_signs_collapse() {
        let gens = uv(4, 4);
        assert!(parse_relation(FieldTag::Z2, &gens, "v^2 + 1/2*u^2").is_err());
        let r = parse_relation(FieldTag::Z2, &gens, "v^2 - u*v - 3*u^2").unwrap();
        let p = Presentation::new(FieldTag::Z2, gens, vec![r], vec![], 8).unwrap();
        assert_eq!(p.render_relation(&p.relations[0]), "v^2 + u*v + u^2");
    }

    #[test]
    fn rejects_inhomogeneous_and_param_leading() {
        let gens = uv(4, 5);
        let r = parse_relation(FieldTag::Q, &gens, "v + u").unwrap();
        assert!(Presentation::new(FieldTag::Q, gens.clone(), vec![r], vec![], 10).is_err());
        let r = parse_relation(FieldTag::Q, &gens, "alpha*u^2").unwrap();
        assert!(Presentation::new(FieldTag::Q, gens, vec![r], vec![], 10).is_err());
    }
}
