//! Intersection structure of the graph subspaces `H_σ = {(u, σu)}`.
//!
//! For a finite group the reduced separating scheme is the union of the
//! `H_σ`, and `dim(H_σ ∩ H_τ) = dim fix(τ⁻¹σ)`. The graph below records those
//! dimensions for every pair and answers connectivity questions in a given
//! codimension.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::FiniteMatrixGroup;

/// Complete weighted graph on the group elements.
#[derive(Debug, Clone)]
pub struct SchemeGraph<'g, F: Field> {
    group: &'g FiniteMatrixGroup<F>,
    order: usize,
    weights: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub codim: usize,
    pub connected: bool,
    /// Components ordered by smallest member; members ascending.
    pub components: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
struct GraphJson {
    order: usize,
    dimension: usize,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Debug, Serialize)]
struct VertexJson {
    index: usize,
    codim: usize,
}

#[derive(Debug, Serialize)]
struct EdgeJson {
    a: usize,
    b: usize,
    weight: usize,
}

/// Builds the weight table `w(σ, τ) = dim fix(τ⁻¹σ)`.
pub fn build_scheme_graph<F: Field>(group: &FiniteMatrixGroup<F>) -> SchemeGraph<'_, F> {
    let order = group.order();
    let classes = group.classifications();
    let rows: Vec<Vec<u8>> = (0..order)
        .into_par_iter()
        .map(|s| {
            (s + 1..order)
                .map(|t| {
                    let k = group.product_index(group.inverse_index(t), s);
                    classes[k].fixed_dim as u8
                })
                .collect()
        })
        .collect();
    let n = group.dim() as u8;
    let mut weights = vec![n; order * order];
    for (s, row) in rows.into_iter().enumerate() {
        for (off, w) in row.into_iter().enumerate() {
            let t = s + 1 + off;
            weights[s * order + t] = w;
            weights[t * order + s] = w;
        }
    }
    SchemeGraph {
        group,
        order,
        weights,
    }
}

impl<'g, F: Field> SchemeGraph<'g, F> {
    pub fn group(&self) -> &'g FiniteMatrixGroup<F> {
        self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// `dim(H_σ ∩ H_τ)`.
    pub fn weight(&self, s: usize, t: usize) -> usize {
        self.weights[s * self.order + t] as usize
    }

    fn threshold(&self, codim: usize) -> usize {
        self.dim().saturating_sub(codim)
    }

    /// Number of vertex pairs whose intersection has codimension `<= codim`.
    pub fn edge_count(&self, codim: usize) -> usize {
        let th = self.threshold(codim);
        (0..self.order)
            .flat_map(|s| (s + 1..self.order).map(move |t| (s, t)))
            .filter(|&(s, t)| self.weight(s, t) >= th)
            .count()
    }

    /// Connected components after keeping only edges with intersection
    /// codimension `<= codim`, i.e. `w >= n - codim`.
    pub fn connectivity_at_codim(&self, codim: usize) -> Connectivity {
        let th = self.threshold(codim);
        let mut label = vec![usize::MAX; self.order];
        let mut components = Vec::new();
        for start in 0..self.order {
            if label[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            label[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(s) = queue.pop_front() {
                for (t, lt) in label.iter_mut().enumerate() {
                    if *lt == usize::MAX && self.weight(s, t) >= th {
                        *lt = id;
                        members.push(t);
                        queue.push_back(t);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        Connectivity {
            codim,
            connected: components.len() == 1,
            components,
        }
    }

    pub fn to_dot(&self) -> String {
        let n = self.dim();
        let mut out = String::from("graph scheme {\n");
        for c in self.group.classifications() {
            let _ = writeln!(
                out,
                "  v{} [label=\"{} (codim {})\"];",
                c.index, c.index, c.codim
            );
        }
        for s in 0..self.order {
            for t in s + 1..self.order {
                let w = self.weight(s, t);
                let _ = writeln!(out, "  v{s} -- v{t} [label=\"{w}\", codim={}];", n - w);
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            order: self.order,
            dimension: self.dim(),
            vertices: self
                .group
                .classifications()
                .iter()
                .map(|c| VertexJson {
                    index: c.index,
                    codim: c.codim,
                })
                .collect(),
            edges: (0..self.order)
                .flat_map(|s| (s + 1..self.order).map(move |t| (s, t)))
                .map(|(a, b)| EdgeJson {
                    a,
                    b,
                    weight: self.weight(a, b),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn export(&self, format: &str) -> Result<String> {
        match format {
            "dot" => Ok(self.to_dot()),
            "json" => Ok(self.to_json()),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}
