use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::series::{Coeff, MIndex};

/// Expression over jet coordinates: space variables `z_i`, components `u_l`
/// and their partial derivatives `∂^j u_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JetExpr {
    Const(Coeff),
    SpaceVar(usize),
    /// `∂^index u_component`; the zero index is `u_component` itself.
    Jet { component: usize, index: MIndex },
    Add(Vec<JetExpr>),
    Mul(Vec<JetExpr>),
    Pow(Box<JetExpr>, u32),
    Inv(Box<JetExpr>),
    Neg(Box<JetExpr>),
}

/// Variable and component names used when parsing and printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Names {
    pub space_vars: Vec<String>,
    pub components: Vec<String>,
}

impl Names {
    pub fn new<S: Into<String>>(space_vars: impl IntoIterator<Item = S>, components: impl IntoIterator<Item = S>) -> Self {
        Names {
            space_vars: space_vars.into_iter().map(Into::into).collect(),
            components: components.into_iter().map(Into::into).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.space_vars.len()
    }
}

/// How an expression depends on the jet coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetDependence {
    /// No jet node at all.
    Free,
    /// Homogeneous of degree one in the jets.
    Linear,
    /// Anything else: polynomial of higher degree, affine, or jets inside `inv`.
    Other,
}

impl JetExpr {
    pub fn constant(c: Coeff) -> Self {
        JetExpr::Const(c)
    }

    pub fn int(n: i64) -> Self {
        JetExpr::Const(Coeff::from_integer(n.into()))
    }

    pub fn jet(component: usize, index: Vec<u32>) -> Self {
        JetExpr::Jet { component, index: MIndex::new(index) }
    }

    /// Flatten nested sums and products, collapse one-element lists, and fold
    /// negations of constants and double negations. Idempotent.
    pub fn normalize(self) -> JetExpr {
        match self {
            JetExpr::Add(children) => {
                let mut flat = Vec::new();
                for c in children {
                    match c.normalize() {
                        JetExpr::Add(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                collapse(flat, JetExpr::Add, || JetExpr::int(0))
            }
            JetExpr::Mul(children) => {
                let mut flat = Vec::new();
                for c in children {
                    match c.normalize() {
                        JetExpr::Mul(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                collapse(flat, JetExpr::Mul, || JetExpr::int(1))
            }
            JetExpr::Neg(child) => match child.normalize() {
                JetExpr::Const(c) => JetExpr::Const(-c),
                JetExpr::Neg(inner) => *inner,
                other => JetExpr::Neg(Box::new(other)),
            },
            JetExpr::Pow(b, n) => JetExpr::Pow(Box::new(b.normalize()), n),
            JetExpr::Inv(c) => JetExpr::Inv(Box::new(c.normalize())),
            leaf => leaf,
        }
    }

    /// Largest `|j|` over the jet nodes, 0 if there are none.
    pub fn jet_order(&self) -> u32 {
        let mut best = 0;
        self.visit(&mut |e| {
            if let JetExpr::Jet { index, .. } = e {
                best = best.max(index.degree());
            }
        });
        best
    }

    pub fn has_jets(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, JetExpr::Jet { .. }));
        found
    }

    pub fn visit(&self, f: &mut impl FnMut(&JetExpr)) {
        f(self);
        match self {
            JetExpr::Add(cs) | JetExpr::Mul(cs) => cs.iter().for_each(|c| c.visit(f)),
            JetExpr::Pow(b, _) => b.visit(f),
            JetExpr::Inv(c) | JetExpr::Neg(c) => c.visit(f),
            _ => {}
        }
    }

    /// Syntactic classification used to decide whether the exponential form
    /// `e^{tX} u_0` applies.
    pub fn dependence(&self) -> JetDependence {
        use JetDependence::*;
        match self {
            JetExpr::Const(_) | JetExpr::SpaceVar(_) => Free,
            JetExpr::Jet { .. } => Linear,
            JetExpr::Neg(c) => c.dependence(),
            JetExpr::Inv(c) => match c.dependence() {
                Free => Free,
                _ => Other,
            },
            JetExpr::Pow(b, n) => match (b.dependence(), n) {
                (Free, _) | (_, 0) => Free,
                (Linear, 1) => Linear,
                _ => Other,
            },
            JetExpr::Add(cs) => {
                let deps: Vec<_> = cs.iter().map(JetExpr::dependence).collect();
                if deps.iter().all(|d| *d == Free) {
                    Free
                } else if deps.iter().all(|d| *d == Linear) {
                    Linear
                } else {
                    Other
                }
            }
            JetExpr::Mul(cs) => {
                let mut linear = 0;
                for d in cs.iter().map(JetExpr::dependence) {
                    match d {
                        Free => {}
                        Linear => linear += 1,
                        Other => return Other,
                    }
                }
                match linear {
                    0 => Free,
                    1 => Linear,
                    _ => Other,
                }
            }
        }
    }

    /// Every constant nonnegative, no negation, and every `inv` argument of
    /// the form `c - (nonnegative terms)` with `c > 0`, so the expanded
    /// expression has nonnegative Taylor coefficients.
    pub fn is_syntactically_nonnegative(&self) -> bool {
        match self {
            JetExpr::Const(c) => !c.is_negative(),
            JetExpr::SpaceVar(_) | JetExpr::Jet { .. } => true,
            JetExpr::Neg(_) => false,
            JetExpr::Add(cs) | JetExpr::Mul(cs) => cs.iter().all(JetExpr::is_syntactically_nonnegative),
            JetExpr::Pow(b, _) => b.is_syntactically_nonnegative(),
            JetExpr::Inv(arg) => match arg.as_ref() {
                JetExpr::Const(c) => c.is_positive(),
                JetExpr::Add(cs) => match cs.split_first() {
                    Some((JetExpr::Const(c), rest)) if c.is_positive() => rest.iter().all(|t| match t {
                        JetExpr::Neg(inner) => inner.is_syntactically_nonnegative() && !inner.is_constant(),
                        _ => false,
                    }),
                    _ => false,
                },
                _ => false,
            },
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            JetExpr::Const(_) => true,
            JetExpr::SpaceVar(_) | JetExpr::Jet { .. } => false,
            JetExpr::Add(cs) | JetExpr::Mul(cs) => cs.iter().all(JetExpr::is_constant),
            JetExpr::Pow(b, _) => b.is_constant(),
            JetExpr::Inv(c) | JetExpr::Neg(c) => c.is_constant(),
        }
    }

    /// Canonical text form; `parse(print(e)) == e` for normalized `e`.
    pub fn print(&self, names: &Names) -> String {
        let mut out = String::new();
        self.write_expr(names, &mut out);
        out
    }

    fn write_expr(&self, names: &Names, out: &mut String) {
        match self {
            JetExpr::Add(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    match (i, c) {
                        (0, _) => c.write_term(names, out),
                        (_, JetExpr::Neg(inner)) => {
                            out.push_str(" - ");
                            inner.write_term(names, out);
                        }
                        (_, JetExpr::Const(k)) if k.is_negative() => {
                            out.push_str(" - ");
                            JetExpr::Const(-k).write_term(names, out);
                        }
                        _ => {
                            out.push_str(" + ");
                            c.write_term(names, out);
                        }
                    }
                }
            }
            _ => self.write_term(names, out),
        }
    }

    fn write_term(&self, names: &Names, out: &mut String) {
        match self {
            JetExpr::Mul(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push('*');
                    }
                    c.write_factor(names, out);
                }
            }
            _ => self.write_factor(names, out),
        }
    }

    fn write_factor(&self, names: &Names, out: &mut String) {
        match self {
            JetExpr::Pow(b, n) => {
                b.write_atom(names, out);
                let _ = write!(out, "^{n}");
            }
            _ => self.write_atom(names, out),
        }
    }

    fn write_atom(&self, names: &Names, out: &mut String) {
        match self {
            JetExpr::Const(c) => {
                if c.is_negative() {
                    out.push('-');
                }
                let a = c.abs();
                if a.denom().is_one() {
                    let _ = write!(out, "{}", a.numer());
                } else {
                    let _ = write!(out, "{}/{}", a.numer(), a.denom());
                }
            }
            JetExpr::SpaceVar(i) => out.push_str(&names.space_vars[*i]),
            JetExpr::Jet { component, index } => {
                let name = &names.components[*component];
                if index.exponents().iter().all(Zero::is_zero) {
                    out.push_str(name);
                } else {
                    let list: Vec<String> = index.exponents().iter().map(u32::to_string).collect();
                    let _ = write!(out, "D({name},[{}])", list.join(","));
                }
            }
            JetExpr::Inv(c) => {
                out.push_str("inv(");
                c.write_expr(names, out);
                out.push(')');
            }
            JetExpr::Neg(c) => {
                out.push('-');
                c.write_atom(names, out);
            }
            JetExpr::Add(_) | JetExpr::Mul(_) | JetExpr::Pow(..) => {
                out.push('(');
                self.write_expr(names, out);
                out.push(')');
            }
        }
    }
}

fn collapse(mut items: Vec<JetExpr>, wrap: fn(Vec<JetExpr>) -> JetExpr, empty: fn() -> JetExpr) -> JetExpr {
    match items.len() {
        0 => empty(),
        1 => items.pop().expect("one element"),
        _ => wrap(items),
    }
}
