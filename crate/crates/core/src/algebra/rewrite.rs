//! Relations oriented as rewrite rules `leading monomial -> lower terms`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::{monomial_cmp, one_poly, Monomial, ParamPoly};
use super::presentation::Presentation;
use crate::field::{int, FieldTag};
use crate::Error;

/// Linear combination of monomials with parameter-polynomial coefficients.
pub type LinComb = BTreeMap<Monomial, ParamPoly>;

pub const STEP_BUDGET: usize = 200_000;

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Vec<(ParamPoly, Monomial)>,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub field: FieldTag,
    pub degrees: Vec<u32>,
    pub rules: Vec<Rule>,
    pub budget: usize,
}

impl RewriteSystem {
    pub fn new(pres: &Presentation) -> Self {
        let field = pres.field;
        let degrees = pres.degrees();
        let mut rules = Vec::new();
        for rel in &pres.relations {
            let lead = &rel.terms[0];
            let inv = field.inv(&lead.coeff.scalar);
            let rhs = rel.terms[1..]
                .iter()
                .map(|t| {
                    let c = field.neg(&field.mul(&t.coeff.scalar, &inv));
                    let coeff = match &t.coeff.param {
                        Some(p) => ParamPoly::param(field, p, c),
                        None => ParamPoly::constant(field, c),
                    };
                    (coeff, t.monomial.clone())
                })
                .collect();
            rules.push(Rule { lhs: lead.monomial.clone(), rhs });
        }
        // Graded commutativity in characteristic 0: odd generators square to zero.
        if field == FieldTag::Q {
            for (i, d) in degrees.iter().enumerate() {
                if d % 2 == 1 {
                    rules.push(Rule { lhs: Monomial::generator(degrees.len(), i, 2), rhs: Vec::new() });
                }
            }
        }
        RewriteSystem { field, degrees, rules, budget: STEP_BUDGET }
    }

    /// Same system with the rules applied in the given priority order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        let rules = order.iter().map(|&i| self.rules[i].clone()).collect();
        RewriteSystem { rules, ..self.clone() }
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.rules.iter().any(|r| r.lhs.divides(m))
    }

    /// `q * X` expressed on sorted monomials, sign included.
    fn mul_term(&self, q: &Monomial, x: &Monomial, c: &ParamPoly) -> (Monomial, ParamPoly) {
        let c = if q.koszul_negative(x, &self.degrees) { c.scale(self.field, &int(-1)) } else { c.clone() };
        (q.mul(x), c)
    }

    /// One rewrite of monomial `m` by `rule`, which must divide it.
    pub fn step(&self, m: &Monomial, coeff: &ParamPoly, rule: &Rule) -> LinComb {
        let q = rule.lhs.quotient(m);
        // m = sign(q, lhs) q*lhs = sign(q, lhs) q*rhs
        let lead_sign = q.koszul_negative(&rule.lhs, &self.degrees);
        let coeff = if lead_sign { coeff.scale(self.field, &int(-1)) } else { coeff.clone() };
        let mut out = LinComb::new();
        for (c, r) in &rule.rhs {
            let (mono, c) = self.mul_term(&q, r, &c.mul(self.field, &coeff));
            add_into(self.field, &mut out, mono, &c);
        }
        out
    }

    pub fn reduce(&self, mut lc: LinComb) -> Result<LinComb, Error> {
        let mut steps = 0;
        loop {
            let target = lc.iter().rev().find_map(|(m, _)| {
                self.rules.iter().find(|r| r.lhs.divides(m)).map(|r| (m.clone(), r))
            });
            let Some((m, rule)) = target else { return Ok(lc) };
            steps += 1;
            if steps > self.budget {
                return Err(Error::NonTerminating(self.budget));
            }
            let c = lc.remove(&m).expect("term present");
            for (mono, coeff) in self.step(&m, &c, rule) {
                add_into(self.field, &mut lc, mono, &coeff);
            }
        }
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> Result<LinComb, Error> {
        let mut lc = LinComb::new();
        lc.insert(m.clone(), one_poly(self.field));
        self.reduce(lc)
    }

    /// Differences of the two one-step reductions of every overlap of rule heads
    /// in degrees up to `max_degree`, each fully reduced. Empty iff locally confluent.
    pub fn critical_pair_residues(&self, max_degree: u32) -> Result<Vec<LinComb>, Error> {
        let mut out = Vec::new();
        for i in 0..self.rules.len() {
            for j in (i + 1)..self.rules.len() {
                let (a, b) = (&self.rules[i], &self.rules[j]);
                let l = a.lhs.lcm(&b.lhs);
                if l.degree(&self.degrees) > max_degree || l == a.lhs.mul(&b.lhs) {
                    continue;
                }
                let one = one_poly(self.field);
                let left = self.reduce(self.step(&l, &one, a))?;
                let right = self.reduce(self.step(&l, &one, b))?;
                let mut diff = left;
                for (mono, c) in right {
                    add_into(self.field, &mut diff, mono, &c.scale(self.field, &int(-1)));
                }
                if !diff.is_empty() {
                    out.push(diff);
                }
            }
        }
        Ok(out)
    }

    pub fn sorted_terms<'a>(&self, lc: &'a LinComb) -> Vec<(&'a Monomial, &'a ParamPoly)> {
        let mut v: Vec<_> = lc.iter().collect();
        v.sort_by(|a, b| monomial_cmp(b.0, a.0, &self.degrees));
        v
    }
}

pub fn add_into(field: FieldTag, lc: &mut LinComb, m: Monomial, c: &ParamPoly) {
    let sum = match lc.get(&m) {
        Some(old) => old.add(field, c),
        None => c.clone(),
    };
    if sum.is_zero() {
        lc.remove(&m);
    } else {
        lc.insert(m, sum);
    }
}

/// Parses a word like `v*v*u`, `v·v·u` or `u^2 v` into a sorted monomial and its sign.
pub fn parse_word(pres: &Presentation, word: &str) -> Result<(Monomial, bool), Error> {
    let degrees = pres.degrees();
    let mut acc = Monomial::one(degrees.len());
    let mut negative = false;
    for factor in word.split(|c: char| c == '*' || c == '·' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?),
            None => (factor, 1),
        };
        let i = pres
            .generator_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
        let g = Monomial::generator(degrees.len(), i, exp);
        negative ^= acc.koszul_negative(&g, &degrees);
        acc = acc.mul(&g);
    }
    Ok((acc, negative))
}

/// Normal form of a product of generators in the quotient algebra.
pub fn normal_form(pres: &Presentation, word: &str) -> Result<LinComb, Error> {
    let (m, negative) = parse_word(pres, word)?;
    let deg = m.degree(&pres.degrees());
    if deg > pres.truncation {
        return Err(Error::InvalidInput(format!("degree {deg} exceeds truncation {}", pres.truncation)));
    }
    let sys = RewriteSystem::new(pres);
    let mut lc = sys.reduce_monomial(&m)?;
    if negative {
        for c in lc.values_mut() {
            *c = c.scale(pres.field, &int(-1));
        }
    }
    Ok(lc)
}

pub fn render_lincomb(pres: &Presentation, lc: &LinComb) -> String {
    if lc.is_empty() {
        return "0".into();
    }
    let sys = RewriteSystem::new(pres);
    let names = pres.names();
    sys.sorted_terms(lc)
        .into_iter()
        .map(|(m, c)| {
            let mono = m.render(&names);
            match c.as_constant() {
                Some(k) if k == int(1) => mono,
                Some(k) if !k.is_zero() => format!("{}*{mono}", crate::field::fmt_scalar(&k)),
                _ => format!("({c})*{mono}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
