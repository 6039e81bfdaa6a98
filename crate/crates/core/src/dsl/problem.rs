use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ast::{JetExpr, Names};
use super::eval::eval_initial;
use super::parser::parse_expr;
use crate::error::{Error, Result};
use crate::series::VSeries;

/// On-disk problem description; expressions are kept as source text.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space_vars: Vec<String>,
    pub components: Vec<String>,
    pub field: Vec<String>,
    pub initial: Vec<String>,
    pub order_t: usize,
    pub trunc_deg: u32,
}

/// A validated initial value problem `∂_t u_l = f_l(z, u, ∂u, ...)`,
/// `u(0) = u_0`, truncated at order `K` in `t` and total degree `D` in `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    names: Names,
    field: Vec<JetExpr>,
    initial: Vec<JetExpr>,
    order_t: usize,
    trunc_deg: u32,
}

impl ProblemSpec {
    /// Validates shapes, jet-free initial data and the degree budget
    /// `trunc_deg >= s * order_t`.
    pub fn new(names: Names, field: Vec<JetExpr>, initial: Vec<JetExpr>, order_t: usize, trunc_deg: u32) -> Result<Self> {
        if names.space_vars.is_empty() || names.components.is_empty() {
            return Err(Error::InvalidProblem("need at least one space variable and one component".into()));
        }
        let mut seen = HashSet::new();
        for n in names.space_vars.iter().chain(&names.components) {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidProblem(format!("duplicate name `{n}`")));
            }
            if n == "D" || n == "inv" {
                return Err(Error::InvalidProblem(format!("`{n}` is reserved")));
            }
        }
        let m = names.components.len();
        if field.len() != m || initial.len() != m {
            return Err(Error::InvalidProblem(format!(
                "{m} components but {} field and {} initial expressions",
                field.len(),
                initial.len()
            )));
        }
        for (i, e) in initial.iter().enumerate() {
            if e.has_jets() {
                return Err(Error::InvalidProblem(format!("initial[{i}] refers to a component")));
            }
        }
        for (i, e) in field.iter().chain(&initial).enumerate() {
            let mut bad = None;
            e.visit(&mut |node| match node {
                JetExpr::SpaceVar(v) if *v >= names.nvars() => bad = Some(format!("space variable {v}")),
                JetExpr::Jet { component, index } if *component >= m || index.len() != names.nvars() => {
                    bad = Some(format!("jet of component {component}"))
                }
                _ => {}
            });
            if let Some(b) = bad {
                return Err(Error::InvalidProblem(format!("expression {i}: invalid {b}")));
            }
        }
        let p = ProblemSpec { names, field, initial, order_t, trunc_deg };
        let required = p.jet_order() * order_t as u32;
        if trunc_deg < required {
            return Err(Error::Budget { trunc_deg, required });
        }
        Ok(p)
    }

    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        let names = Names { space_vars: file.space_vars.clone(), components: file.components.clone() };
        let parse_all = |label: &str, exprs: &[String]| {
            exprs
                .iter()
                .enumerate()
                .map(|(i, t)| parse_expr(t, &names).map_err(|e| e.located(format!("{label}[{i}]"))))
                .collect::<Result<Vec<_>>>()
        };
        let field = parse_all("field", &file.field)?;
        let initial = parse_all("initial", &file.initial)?;
        ProblemSpec::new(names, field, initial, file.order_t, file.trunc_deg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            space_vars: self.names.space_vars.clone(),
            components: self.names.components.clone(),
            field: self.field.iter().map(|e| e.print(&self.names)).collect(),
            initial: self.initial.iter().map(|e| e.print(&self.names)).collect(),
            order_t: self.order_t,
            trunc_deg: self.trunc_deg,
        }
    }

    /// Same problem with new truncation orders, revalidated.
    pub fn with_orders(&self, order_t: Option<usize>, trunc_deg: Option<u32>) -> Result<Self> {
        ProblemSpec::new(
            self.names.clone(),
            self.field.clone(),
            self.initial.clone(),
            order_t.unwrap_or(self.order_t),
            trunc_deg.unwrap_or(self.trunc_deg),
        )
    }

    pub fn names(&self) -> &Names {
        &self.names
    }

    pub fn field(&self) -> &[JetExpr] {
        &self.field
    }

    pub fn initial(&self) -> &[JetExpr] {
        &self.initial
    }

    pub fn order_t(&self) -> usize {
        self.order_t
    }

    pub fn trunc_deg(&self) -> u32 {
        self.trunc_deg
    }

    pub fn nvars(&self) -> usize {
        self.names.nvars()
    }

    pub fn ncomponents(&self) -> usize {
        self.names.components.len()
    }

    /// Order `s` of the problem: the largest `|j|` among jets in the field.
    pub fn jet_order(&self) -> u32 {
        self.field.iter().map(JetExpr::jet_order).max().unwrap_or(0)
    }

    /// `u_0` expanded to the full truncation degree.
    pub fn initial_series(&self) -> Result<VSeries> {
        let comps = self
            .initial
            .iter()
            .enumerate()
            .map(|(i, e)| eval_initial(e, self.nvars(), self.trunc_deg).map_err(|err| err.located(format!("initial[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        VSeries::new(comps)
    }
}

/// Free-function form of [`ProblemSpec::jet_order`].
pub fn jet_order(p: &ProblemSpec) -> u32 {
    p.jet_order()
}
