//! Abstract syntax of Kähler potentials.

use std::collections::BTreeMap;

use thiserror::Error;

/// Chart variable: the four formal coordinates, in jet-slot order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Z1,
    Z2,
    Zb1,
    Zb2,
}

impl Variable {
    pub fn index(self) -> usize {
        match self {
            Variable::Z1 => 0,
            Variable::Z2 => 1,
            Variable::Zb1 => 2,
            Variable::Zb2 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::Z1 => "z1",
            Variable::Z2 => "z2",
            Variable::Zb1 => "zb1",
            Variable::Zb2 => "zb2",
        }
    }

    pub fn is_barred(self) -> bool {
        matches!(self, Variable::Zb1 | Variable::Zb2)
    }

    /// z^α ↔ z̄^α.
    pub fn conjugate(self) -> Variable {
        match self {
            Variable::Z1 => Variable::Zb1,
            Variable::Z2 => Variable::Zb2,
            Variable::Zb1 => Variable::Z1,
            Variable::Zb2 => Variable::Z2,
        }
    }
}

/// Rational exponent literal, denominator > 0. Kept exactly as written so
/// printing round-trips structurally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "exponent denominator must be positive");
        Rational { num, den }
    }

    pub fn is_integer(&self) -> bool {
        self.num % self.den == 0
    }
}

/// Expression tree of a potential over (z1, z2, zb1, zb2), named real
/// parameters and complex constants (written with the reserved literal `i`).
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialExpr {
    /// Non-negative real literal; negative constants parse as `Neg`.
    Number(f64),
    /// The imaginary unit.
    ImaginaryUnit,
    Var(Variable),
    Param(String),
    Neg(Box<PotentialExpr>),
    Add(Box<PotentialExpr>, Box<PotentialExpr>),
    Sub(Box<PotentialExpr>, Box<PotentialExpr>),
    Mul(Box<PotentialExpr>, Box<PotentialExpr>),
    Div(Box<PotentialExpr>, Box<PotentialExpr>),
    Pow(Box<PotentialExpr>, Rational),
    Exp(Box<PotentialExpr>),
    Ln(Box<PotentialExpr>),
    /// Formal conjugation: swaps z^α ↔ z̄^α and conjugates constants.
    Conj(Box<PotentialExpr>),
}

// constructor shorthands, not operator impls: trees are built positionally
#[allow(clippy::should_implement_trait)]
impl PotentialExpr {
    pub fn add(lhs: PotentialExpr, rhs: PotentialExpr) -> Self {
        PotentialExpr::Add(Box::new(lhs), Box::new(rhs))
    }

    pub fn mul(lhs: PotentialExpr, rhs: PotentialExpr) -> Self {
        PotentialExpr::Mul(Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: PotentialExpr, num: i64, den: i64) -> Self {
        PotentialExpr::Pow(Box::new(base), Rational::new(num, den))
    }

    pub fn exp(arg: PotentialExpr) -> Self {
        PotentialExpr::Exp(Box::new(arg))
    }

    pub fn ln(arg: PotentialExpr) -> Self {
        PotentialExpr::Ln(Box::new(arg))
    }

    pub fn conj(arg: PotentialExpr) -> Self {
        PotentialExpr::Conj(Box::new(arg))
    }

    /// Names of all parameter references in the tree.
    pub fn parameters(&self) -> Vec<&str> {
        let mut names = Vec::new();
        self.walk(&mut |e| {
            if let PotentialExpr::Param(name) = e {
                if !names.contains(&name.as_str()) {
                    names.push(name.as_str());
                }
            }
        });
        names
    }

    /// Whether the expression mentions a barred coordinate, counting
    /// variables under an odd number of `conj` nodes as flipped.
    pub fn references_barred(&self) -> bool {
        fn go(e: &PotentialExpr, under_conj: bool) -> bool {
            match e {
                PotentialExpr::Var(v) => v.is_barred() != under_conj,
                PotentialExpr::Conj(inner) => go(inner, !under_conj),
                PotentialExpr::Number(_)
                | PotentialExpr::ImaginaryUnit
                | PotentialExpr::Param(_) => false,
                PotentialExpr::Neg(a)
                | PotentialExpr::Exp(a)
                | PotentialExpr::Ln(a)
                | PotentialExpr::Pow(a, _) => go(a, under_conj),
                PotentialExpr::Add(a, b)
                | PotentialExpr::Sub(a, b)
                | PotentialExpr::Mul(a, b)
                | PotentialExpr::Div(a, b) => go(a, under_conj) || go(b, under_conj),
            }
        }
        go(self, false)
    }

    /// Replaces every reference to parameter `name` with `replacement`.
    pub fn substitute_param(&self, name: &str, replacement: &PotentialExpr) -> PotentialExpr {
        match self {
            PotentialExpr::Param(p) if p == name => replacement.clone(),
            PotentialExpr::Number(_)
            | PotentialExpr::ImaginaryUnit
            | PotentialExpr::Var(_)
            | PotentialExpr::Param(_) => self.clone(),
            PotentialExpr::Neg(a) => {
                PotentialExpr::Neg(Box::new(a.substitute_param(name, replacement)))
            }
            PotentialExpr::Add(a, b) => PotentialExpr::Add(
                Box::new(a.substitute_param(name, replacement)),
                Box::new(b.substitute_param(name, replacement)),
            ),
            PotentialExpr::Sub(a, b) => PotentialExpr::Sub(
                Box::new(a.substitute_param(name, replacement)),
                Box::new(b.substitute_param(name, replacement)),
            ),
            PotentialExpr::Mul(a, b) => PotentialExpr::Mul(
                Box::new(a.substitute_param(name, replacement)),
                Box::new(b.substitute_param(name, replacement)),
            ),
            PotentialExpr::Div(a, b) => PotentialExpr::Div(
                Box::new(a.substitute_param(name, replacement)),
                Box::new(b.substitute_param(name, replacement)),
            ),
            PotentialExpr::Pow(a, r) => {
                PotentialExpr::Pow(Box::new(a.substitute_param(name, replacement)), *r)
            }
            PotentialExpr::Exp(a) => {
                PotentialExpr::Exp(Box::new(a.substitute_param(name, replacement)))
            }
            PotentialExpr::Ln(a) => {
                PotentialExpr::Ln(Box::new(a.substitute_param(name, replacement)))
            }
            PotentialExpr::Conj(a) => {
                PotentialExpr::Conj(Box::new(a.substitute_param(name, replacement)))
            }
        }
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a PotentialExpr)) {
        f(self);
        match self {
            PotentialExpr::Number(_)
            | PotentialExpr::ImaginaryUnit
            | PotentialExpr::Var(_)
            | PotentialExpr::Param(_) => {}
            PotentialExpr::Neg(a)
            | PotentialExpr::Exp(a)
            | PotentialExpr::Ln(a)
            | PotentialExpr::Conj(a)
            | PotentialExpr::Pow(a, _) => a.walk(f),
            PotentialExpr::Add(a, b)
            | PotentialExpr::Sub(a, b)
            | PotentialExpr::Mul(a, b)
            | PotentialExpr::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
        }
    }
}

/// Named real parameter values bound to a potential.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterTable {
    values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BindingError {
    #[error("parameter `{0}` is not a finite real value")]
    NonFinite(String),
    #[error("parameter `{0}` is bound twice")]
    Duplicate(String),
    #[error("unbound parameter `{0}`")]
    Unbound(String),
}

impl ParameterTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.insert(name, value).expect("builder values are finite and distinct");
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) -> Result<(), BindingError> {
        if !value.is_finite() {
            return Err(BindingError::NonFinite(name.to_string()));
        }
        if self.values.insert(name.to_string(), value).is_some() {
            return Err(BindingError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    /// Inserts or overwrites, used when layering defaults under user values.
    pub fn set(&mut self, name: &str, value: f64) {
        assert!(value.is_finite(), "parameter values must be finite");
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn get_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks that every parameter reference in `expr` is bound.
    pub fn check_bound(&self, expr: &PotentialExpr) -> Result<(), BindingError> {
        for name in expr.parameters() {
            if self.get(name).is_none() {
                return Err(BindingError::Unbound(name.to_string()));
            }
        }
        Ok(())
    }
}
