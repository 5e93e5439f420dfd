//! Family templates: presentations whose exponents and degrees are integer
//! expressions in `n`, `m`, `d`, plus a small expression language for the
//! applicability and side conditions stored in the fixture files.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algebra::{Generator, Monomial, ParamCoeff, Presentation, Relation, RewriteSystem, Term};
use crate::field::{int, FieldTag};
use crate::Error;

pub type Env = BTreeMap<String, i64>;

pub fn env(d: u32, n: u32, m: u32) -> Env {
    [("d", d), ("n", n), ("m", m)].into_iter().map(|(k, v)| (k.to_string(), i64::from(v))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Num(Ratio<i64>),
    Bool(bool),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(&'static str),
}

const OPS: [&str; 17] = ["||", "&&", "==", "!=", "<=", ">=", "<", ">", "+", "-", "*", "/", "%", "!", "(", ")", "^"];

fn lex(src: &str) -> Result<Vec<Tok>, Error> {
    let mut out = Vec::new();
    let s = src.as_bytes();
    let mut i = 0;
    'outer: while i < s.len() {
        let c = s[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Int(src[start..i].parse().map_err(|_| Error::Parse(format!("bad number in `{src}`")))?));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < s.len() && (s[i].is_ascii_alphanumeric() || s[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(src[start..i].to_string()));
            continue;
        }
        for op in OPS {
            if src[i..].starts_with(op) {
                out.push(Tok::Op(op));
                i += op.len();
                continue 'outer;
            }
        }
        return Err(Error::Parse(format!("unexpected `{c}` in `{src}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in `{}`", self.src))
    }

    fn peek_op(&self) -> Option<&'static str> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(o)) => Some(o),
            _ => None,
        }
    }

    fn eat(&mut self, op: &str) -> bool {
        if self.peek_op() == Some(op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn bool_of(&self, v: Value) -> Result<bool, Error> {
        match v {
            Value::Bool(b) => Ok(b),
            Value::Num(_) => Err(self.err("expected a condition")),
        }
    }

    fn num_of(&self, v: Value) -> Result<Ratio<i64>, Error> {
        match v {
            Value::Num(x) => Ok(x),
            Value::Bool(_) => Err(self.err("expected a number")),
        }
    }

    fn or(&mut self) -> Result<Value, Error> {
        let mut v = self.and()?;
        while self.eat("||") {
            let rhs = self.and()?;
            v = Value::Bool(self.bool_of(v)? | self.bool_of(rhs)?);
        }
        Ok(v)
    }

    fn and(&mut self) -> Result<Value, Error> {
        let mut v = self.cmp()?;
        while self.eat("&&") {
            let rhs = self.cmp()?;
            v = Value::Bool(self.bool_of(v)? & self.bool_of(rhs)?);
        }
        Ok(v)
    }

    fn cmp(&mut self) -> Result<Value, Error> {
        let v = self.add()?;
        let Some(op) = self.peek_op().filter(|o| ["==", "!=", "<=", ">=", "<", ">"].contains(o)) else {
            return Ok(v);
        };
        self.pos += 1;
        let rhs = self.add()?;
        let (a, b) = (self.num_of(v)?, self.num_of(rhs)?);
        Ok(Value::Bool(match op {
            "==" => a == b,
            "!=" => a != b,
            "<=" => a <= b,
            ">=" => a >= b,
            "<" => a < b,
            _ => a > b,
        }))
    }

    fn add(&mut self) -> Result<Value, Error> {
        let mut v = self.mul()?;
        loop {
            if self.eat("+") {
                let r = self.mul()?;
                v = Value::Num(self.num_of(v)? + self.num_of(r)?);
            } else if self.eat("-") {
                let r = self.mul()?;
                v = Value::Num(self.num_of(v)? - self.num_of(r)?);
            } else {
                return Ok(v);
            }
        }
    }

    fn mul(&mut self) -> Result<Value, Error> {
        let mut v = self.unary()?;
        loop {
            if self.eat("*") {
                let r = self.unary()?;
                v = Value::Num(self.num_of(v)? * self.num_of(r)?);
            } else if self.eat("/") {
                let r = self.unary()?;
                let r = self.num_of(r)?;
                if r == Ratio::from_integer(0) {
                    return Err(self.err("division by zero"));
                }
                v = Value::Num(self.num_of(v)? / r);
            } else if self.eat("%") {
                let r = self.unary()?;
                let (a, b) = (self.num_of(v)?, self.num_of(r)?);
                if !a.is_integer() || !b.is_integer() || *b.numer() == 0 {
                    return Err(self.err("% needs integers"));
                }
                v = Value::Num(Ratio::from_integer(a.numer().rem_euclid(*b.numer())));
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, Error> {
        if self.eat("-") {
            let v = self.unary()?;
            return Ok(Value::Num(-self.num_of(v)?));
        }
        if self.eat("!") {
            let v = self.unary()?;
            return Ok(Value::Bool(!self.bool_of(v)?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Value, Error> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Value::Num(Ratio::from_integer(k)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    _ => self
                        .env
                        .get(&name)
                        .map(|&v| Value::Num(Ratio::from_integer(v)))
                        .ok_or_else(|| self.err(&format!("unknown variable `{name}`"))),
                }
            }
            Some(Tok::Op("(")) => {
                self.pos += 1;
                let v = self.or()?;
                if !self.eat(")") {
                    return Err(self.err("missing `)`"));
                }
                Ok(v)
            }
            _ => Err(self.err("unexpected end of expression")),
        }
    }
}

pub fn eval(src: &str, env: &Env) -> Result<Value, Error> {
    let mut p = Parser { toks: lex(src)?, pos: 0, env, src };
    let v = p.or()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub fn eval_bool(src: &str, env: &Env) -> Result<bool, Error> {
    match eval(src, env)? {
        Value::Bool(b) => Ok(b),
        Value::Num(_) => Err(Error::Parse(format!("`{src}` is not a condition"))),
    }
}

pub fn eval_num(src: &str, env: &Env) -> Result<Ratio<i64>, Error> {
    match eval(src, env)? {
        Value::Num(x) => Ok(x),
        Value::Bool(_) => Err(Error::Parse(format!("`{src}` is not a number"))),
    }
}

pub fn eval_int(src: &str, env: &Env) -> Result<i64, Error> {
    let x = eval_num(src, env)?;
    if x.is_integer() {
        Ok(*x.numer())
    } else {
        Err(Error::Parse(format!("`{src}` is not an integer here")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTemplate {
    pub name: String,
    pub degree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub param: String,
    pub zero_if: String,
}

/// A stated item the engine does not take literally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorTemplate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub applicability: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTemplate {
    pub tag: String,
    pub generators: Vec<GeneratorTemplate>,
    pub relations: Vec<String>,
    pub applicability: String,
    #[serde(default)]
    pub side_conditions: Vec<SideCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erratum: Option<Erratum>,
    /// At n = m this family is the same ring as the named one and is not listed twice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub same_as_when_n_eq_m: Option<String>,
}

/// How one parameter of a template fares at a given (n, m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamStatus {
    pub param: String,
    pub term: String,
    /// False when the term's exponent is not a nonnegative integer, so the term does not exist.
    pub integral: bool,
    /// The stated side conditions set the parameter to zero.
    pub stated_zero: bool,
    /// The term's monomial is already zero in the quotient.
    pub derived_zero: bool,
}

impl ParamStatus {
    pub fn disagrees(&self) -> bool {
        self.integral && self.stated_zero != self.derived_zero
    }
}

#[derive(Clone, Debug)]
pub struct Instantiated {
    pub presentation: Presentation,
    pub params: Vec<ParamStatus>,
}

struct TermSpec {
    text: String,
    negative: bool,
    scalar: i64,
    param: Option<String>,
    monomial: Option<Monomial>,
}

fn split_top(s: &str, seps: &[char]) -> Vec<(Option<char>, String)> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let mut lead = None;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&c) {
            if !cur.trim().is_empty() || !out.is_empty() || lead.is_some() {
                out.push((lead, cur.trim().to_string()));
            }
            lead = Some(c);
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    out.push((lead, cur.trim().to_string()));
    out.retain(|(_, t)| !t.is_empty());
    out
}

impl FamilyTemplate {
    fn effective_generators(&self) -> &[GeneratorTemplate] {
        match self.erratum.as_ref().and_then(|e| e.generators.as_ref()) {
            Some(g) => g,
            None => &self.generators,
        }
    }

    pub fn effective_applicability(&self) -> &str {
        match self.erratum.as_ref().and_then(|e| e.applicability.as_ref()) {
            Some(a) => a,
            None => &self.applicability,
        }
    }

    pub fn applies(&self, env: &Env) -> Result<bool, Error> {
        eval_bool(self.effective_applicability(), env)
    }

    pub fn stated_applies(&self, env: &Env) -> Result<bool, Error> {
        eval_bool(&self.applicability, env)
    }

    fn parse_term(&self, sign: Option<char>, text: &str, names: &[String], env: &Env) -> Result<TermSpec, Error> {
        let mut spec = TermSpec {
            text: text.to_string(),
            negative: sign == Some('-'),
            scalar: 1,
            param: None,
            monomial: Some(Monomial::one(names.len())),
        };
        for (_, factor) in split_top(text, &['*']) {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (factor.trim(), None),
            };
            if let Ok(k) = base.parse::<i64>() {
                spec.scalar *= k;
                continue;
            }
            let e = match exp {
                None => Some(1),
                Some(e) => {
                    let v = eval_num(e, env)?;
                    (v.is_integer() && *v.numer() >= 0).then(|| *v.numer() as u32)
                }
            };
            match names.iter().position(|n| n == base) {
                Some(i) => match (e, spec.monomial.as_mut()) {
                    (Some(e), Some(mono)) => mono.0[i] += e,
                    _ => spec.monomial = None,
                },
                None => {
                    if spec.param.is_some() || exp.is_some() {
                        return Err(Error::Parse(format!("bad parameter factor `{factor}` in template {}", self.tag)));
                    }
                    spec.param = Some(base.to_string());
                }
            }
        }
        Ok(spec)
    }

    /// Evaluates the template at `env`. Terms whose exponents are not integers are
    /// dropped, stated side conditions are applied, and every parameter is
    /// compared against whether its monomial already vanishes.
    pub fn instantiate(&self, env: &Env, field: FieldTag, truncation: u32) -> Result<Instantiated, Error> {
        let generators = self
            .effective_generators()
            .iter()
            .map(|g| {
                let deg = eval_int(&g.degree, env)?;
                let degree = u32::try_from(deg)
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| Error::InvalidPresentation(format!("generator {} has degree {deg}", g.name)))?;
                Ok(Generator { name: g.name.clone(), degree })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
        let mut rels: Vec<Vec<TermSpec>> = Vec::new();
        for r in &self.relations {
            let terms = split_top(r, &['+', '-'])
                .into_iter()
                .map(|(sign, t)| self.parse_term(sign, &t, &names, env))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(t) = terms.iter().find(|t| t.monomial.is_none() && t.param.is_none()) {
                return Err(Error::InvalidPresentation(format!(
                    "template {}: term `{}` has a non-integral exponent",
                    self.tag, t.text
                )));
            }
            rels.push(terms);
        }
        let stated_zero = |p: &str| -> Result<bool, Error> {
            for c in self.side_conditions.iter().filter(|c| c.param == p) {
                if eval_bool(&c.zero_if, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        let build = |keep: &dyn Fn(&TermSpec) -> bool, conditions: Vec<String>| -> Result<Presentation, Error> {
            let relations = rels
                .iter()
                .map(|terms| Relation {
                    terms: terms
                        .iter()
                        .filter(|t| t.monomial.is_some() && keep(t))
                        .map(|t| Term {
                            coeff: ParamCoeff {
                                scalar: field.reduce(int(if t.negative { -t.scalar } else { t.scalar })),
                                param: t.param.clone(),
                            },
                            monomial: t.monomial.clone().expect("filtered"),
                        })
                        .collect(),
                })
                .collect();
            Presentation::new(field, generators.clone(), relations, conditions, truncation)
        };
        let full = build(&|_| true, Vec::new())?;
        let sys = RewriteSystem::new(&full);
        let mut params = Vec::new();
        let mut conditions = Vec::new();
        for t in rels.iter().flatten() {
            let Some(p) = &t.param else { continue };
            let status = ParamStatus {
                param: p.clone(),
                term: t.text.clone(),
                integral: t.monomial.is_some(),
                stated_zero: stated_zero(p)?,
                derived_zero: match &t.monomial {
                    Some(mono) => sys.reduce_monomial(mono)?.is_empty(),
                    None => true,
                },
            };
            if !status.integral {
                conditions.push(format!("{p} = 0 (term {} does not exist)", t.text));
            } else if status.stated_zero {
                conditions.push(format!("{p} = 0 (stated side condition)"));
            }
            params.push(status);
        }
        let zeroed: Vec<String> = params.iter().filter(|s| s.stated_zero).map(|s| s.param.clone()).collect();
        let presentation = build(&|t| t.param.as_ref().is_none_or(|p| !zeroed.contains(p)), conditions)?;
        Ok(Instantiated { presentation, params })
    }
}
