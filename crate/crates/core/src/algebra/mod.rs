//! Finitely presented graded-commutative algebras over Z2 and Q.

mod dims;
mod poly;
mod presentation;
mod rewrite;

pub use dims::{monomials_up_to, nilpotency_index, parameter_samples, poincare, same_ideal, GradedDims};
pub use poly::{monomial_cmp, Monomial, ParamPoly};
pub use presentation::{parse_relation, Generator, ParamCoeff, Presentation, Relation, Term};
pub use rewrite::{normal_form, parse_word, render_lincomb, LinComb, RewriteSystem, Rule, STEP_BUDGET};
