//! Reader and printer for the extended PDDL dialect.
//!
//! The dialect adds four things to plain STRIPS-with-fluents PDDL:
//!
//! * real-valued action parameters, declared with the type `real`:
//!   `:parameters (?v - vehicle ?vx ?vy ?d - real)`;
//! * region membership, `(inside (location-x ?v) (location-y ?v) ?r)`, true when
//!   the point lies in the closed convex region bound to `?r`;
//! * events, `(:event name :parameters .. :precondition .. :effect ..)`, which fire
//!   whenever their precondition holds (propositional effects only);
//! * problem sections `(:regions (rect O1 40 30 50 40) (poly P x y ..) (obstacle O1)
//!   (objective A))` and `(:parameters-bounds (<= -10 ?vx 10) (>= ?d 0))`.
//!
//! `obstacle` and `objective` are built-in static predicates over region names.
//! Numeric tests accept `(<= lo e hi)` and `(< lo e hi)` as well as the usual two
//! operand comparisons, which are normalised into intervals.

mod ast;
mod error;
mod lexer;
mod parse;
mod print;
mod syntax;

pub use ast::*;
pub use error::{ParseError, Result, Span};
pub use parse::{parse_domain, parse_domain_bytes, parse_problem, parse_problem_bytes};
pub use print::{condition as print_condition, expr as print_expr, print_domain, print_problem};
pub use syntax::BUILTIN_PREDICATES;
