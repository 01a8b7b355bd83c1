//! Variational calculus on jets of maps from the cylinder `(τ, σ)` into a
//! torus with coordinates `x^1..x^n`.

mod form;
mod parse;
mod poly;
mod print;
mod variational;

pub use form::{Horiz, VariationalForm};
pub use parse::{parse_generator, parse_poly};
pub use poly::{total_derivative, CoeffSymbol, DiffPoly, Dir, JetVar, Monomial};
pub use print::{form_to_string, poly_to_string, var_to_string};
pub use variational::{
    certificate, check_wave_type, euler_lagrange, noether, prolong, prolong_form,
    restrict_poly_to_sol0, restrict_to_sol0, rewrite_on_shell, solve_divergence,
    variational_one_form, Generator, Lagrangian, NoetherIntegral,
};
