//! Multivariate models: frames addressed by subsets of variables, realized
//! as partitions of the implicit product universe.
//!
//! The frame of a variable subset `s` has one element per `s`-tuple, and
//! the frame order mirrors subset inclusion: the frame of `s` is coarser
//! than the frame of `t` exactly when `s ⊆ t`. Joins and meets of these
//! frames are the frames of union and intersection, making the family a
//! distributive lattice.

use crate::error::{FcfError, Result};
use crate::frame::Frame;
use crate::universe::Universe;

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub values: Vec<String>,
}

/// An ordered list of finite-domain variables with the product universe.
/// Atom `i` encodes the joint assignment in mixed radix with the first
/// variable most significant, so atoms enumerate assignments
/// lexicographically.
#[derive(Clone)]
pub struct MultivariateModel {
    universe: Universe,
    variables: Vec<Variable>,
    strides: Vec<usize>,
}

impl MultivariateModel {
    pub fn new<N, V>(variables: Vec<(N, Vec<V>)>) -> Result<MultivariateModel>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let variables: Vec<Variable> = variables
            .into_iter()
            .map(|(name, values)| Variable {
                name: name.into(),
                values: values.into_iter().map(Into::into).collect(),
            })
            .collect();
        if variables.is_empty() || variables.iter().any(|v| v.values.is_empty()) {
            return Err(FcfError::EmptyUniverse);
        }
        let mut strides = vec![1usize; variables.len()];
        for i in (0..variables.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * variables[i + 1].values.len();
        }
        let total = strides[0] * variables[0].values.len();
        let mut atoms = Vec::with_capacity(total);
        for idx in 0..total {
            let parts: Vec<String> = variables
                .iter()
                .enumerate()
                .map(|(vi, var)| {
                    let digit = idx / strides[vi] % var.values.len();
                    format!("{}={}", var.name, var.values[digit])
                })
                .collect();
            atoms.push(parts.join(","));
        }
        Ok(MultivariateModel {
            universe: Universe::new(atoms)?,
            variables,
            strides,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| FcfError::UnknownVariable(name.to_string()))
    }

    /// The value index of `var` in the assignment encoded by `atom`.
    pub fn digit(&self, atom: u32, var: usize) -> usize {
        atom as usize / self.strides[var] % self.variables[var].values.len()
    }

    /// The frame of a variable subset: atoms grouped by their `s`-tuple.
    /// The empty subset yields the bottom frame.
    pub fn frame<S: AsRef<str>>(&self, vars: &[S]) -> Result<Frame> {
        let mut indices: Vec<usize> = vars
            .iter()
            .map(|v| self.variable_index(v.as_ref()))
            .collect::<Result<_>>()?;
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Ok(Frame::bottom(&self.universe));
        }
        let mut assignment = vec![0u32; self.universe.len()];
        for atom in 0..self.universe.len() as u32 {
            let mut key = 0usize;
            for &vi in &indices {
                key = key * self.variables[vi].values.len() + self.digit(atom, vi);
            }
            assignment[atom as usize] = key as u32;
        }
        Frame::from_assignment(&self.universe, &assignment)
    }

    /// Variable assignments shared by every atom of `atoms`, used to render
    /// frame elements as partial assignments.
    pub fn constant_assignment(&self, atoms: &[u32]) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (vi, var) in self.variables.iter().enumerate() {
            let digit = self.digit(atoms[0], vi);
            if atoms[1..].iter().all(|&a| self.digit(a, vi) == digit) {
                out.push((var.name.clone(), var.values[digit].clone()));
            }
        }
        out
    }
}
