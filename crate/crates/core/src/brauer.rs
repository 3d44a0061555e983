//! Combinatorial unramified Brauer computation for conic bundles with good
//! discriminant: the subgroup H of (Z/2)^n cut out by the intersection
//! curves, and its quotient by the diagonal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::ProjPoint;

pub const MAX_COMPONENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrauerError {
    #[error("hypotheses violated: {0:?}")]
    HypothesisViolated(Vec<String>),
    #[error("discriminant not good: residue trivial on {0:?}")]
    NotGoodDiscriminant(Vec<String>),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("incomplete witness: {0}")]
    IncompleteWitness(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub residue_nontrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub i: usize,
    pub j: usize,
    pub name: String,
    pub d_i: u8,
    pub d_j: u8,
    pub restriction_i_square: bool,
    pub restriction_j_square: bool,
    pub transversal_rank2: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub h1_base_vanishing: bool,
    pub h2_curves_two_surfaces: bool,
    pub h3_points_three_surfaces: bool,
    pub h4_factorial: bool,
}

impl Hypotheses {
    pub fn all() -> Self {
        Hypotheses {
            h1_base_vanishing: true,
            h2_curves_two_surfaces: true,
            h3_points_three_surfaces: true,
            h4_factorial: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGraph {
    pub components: Vec<Component>,
    pub curves: Vec<Curve>,
    pub hypotheses: Hypotheses,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HResult {
    /// Basis of H as 0/1 strings, component 0 first.
    pub basis: Vec<String>,
    pub order_h: u128,
    pub order_of_quotient: u128,
    pub equality_certified: bool,
    /// Curves with d_i != d_j; they impose nothing.
    pub mixed_curves: Vec<String>,
}

/// Which equality a curve imposes on the component coordinates.
fn imposes_equality(c: &Curve) -> bool {
    match (c.d_i, c.d_j) {
        (1, 1) => true,
        (0, 0) => !(c.restriction_i_square && c.restriction_j_square),
        _ => false,
    }
}

impl DiscriminantGraph {
    pub fn validate(&self) -> Result<(), BrauerError> {
        let n = self.components.len();
        if n == 0 || n > MAX_COMPONENTS {
            return Err(BrauerError::InvalidGraph(format!("{n} components (need 1..={MAX_COMPONENTS})")));
        }
        for c in &self.curves {
            if c.i >= n || c.j >= n {
                return Err(BrauerError::InvalidGraph(format!("curve {} has index out of range", c.name)));
            }
            if c.i == c.j {
                return Err(BrauerError::InvalidGraph(format!("curve {} joins a component to itself", c.name)));
            }
            if c.d_i > 1 || c.d_j > 1 {
                return Err(BrauerError::InvalidGraph(format!("curve {} has residue value outside {{0,1}}", c.name)));
            }
        }
        Ok(())
    }

    fn check_applicable(&self) -> Result<(), BrauerError> {
        self.validate()?;
        let h = &self.hypotheses;
        let failing: Vec<String> = [
            ("h1_base_vanishing", h.h1_base_vanishing),
            ("h2_curves_two_surfaces", h.h2_curves_two_surfaces),
            ("h3_points_three_surfaces", h.h3_points_three_surfaces),
            ("h4_factorial", h.h4_factorial),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n.to_string())
        .collect();
        if !failing.is_empty() {
            return Err(BrauerError::HypothesisViolated(failing));
        }
        let bad: Vec<String> =
            self.components.iter().filter(|c| !c.residue_nontrivial).map(|c| c.name.clone()).collect();
        if !bad.is_empty() {
            return Err(BrauerError::NotGoodDiscriminant(bad));
        }
        Ok(())
    }

    /// Equivalence class label per component under the curve equalities.
    fn classes(&self) -> Vec<usize> {
        let n = self.components.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for c in self.curves.iter().filter(|c| imposes_equality(c)) {
            let (a, b) = (find(&mut parent, c.i), find(&mut parent, c.j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }

    pub fn compute_h(&self) -> Result<HResult, BrauerError> {
        self.check_applicable()?;
        let n = self.components.len();
        let labels = self.classes();
        let mut roots: Vec<usize> = labels.clone();
        roots.sort_unstable();
        roots.dedup();
        let basis = roots
            .iter()
            .map(|r| (0..n).map(|i| if labels[i] == *r { '1' } else { '0' }).collect())
            .collect();
        let k = roots.len() as u32;
        let equality_certified = self
            .curves
            .iter()
            .filter(|c| c.d_i == 0 && c.d_j == 0 && c.restriction_i_square && c.restriction_j_square)
            .all(|c| c.transversal_rank2);
        let mixed_curves = self.curves.iter().filter(|c| c.d_i != c.d_j).map(|c| c.name.clone()).collect();
        Ok(HResult {
            basis,
            order_h: 1u128 << k,
            order_of_quotient: 1u128 << (k - 1),
            equality_certified,
            mixed_curves,
        })
    }

    pub fn corollary_check(&self) -> Result<bool, BrauerError> {
        self.check_applicable()?;
        Ok(self.components.len() >= 2
            && self
                .curves
                .iter()
                .all(|c| c.d_i == 0 && c.d_j == 0 && c.restriction_i_square && c.restriction_j_square))
    }

    /// All elements of H by enumerating (Z/2)^n; bit i is component i.
    pub fn enumerate_h(&self) -> Vec<u64> {
        let n = self.components.len();
        assert!(n <= 20, "enumeration oracle limited to small n");
        let eqs: Vec<&Curve> = self.curves.iter().filter(|c| imposes_equality(c)).collect();
        (0..1u64 << n)
            .filter(|x| eqs.iter().all(|c| (x >> c.i) & 1 == (x >> c.j) & 1))
            .collect()
    }
}

/// Geometric evidence about one discriminant component.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ComponentWitness {
    pub name: String,
    pub split_point: Option<ProjPoint>,
    pub nonsplit_point: Option<ProjPoint>,
}

/// Geometric evidence about one curve in the intersection of two components.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CurveWitness {
    pub i: usize,
    pub j: usize,
    pub name: String,
    /// Fibers over general points of the curve are two distinct lines.
    pub generic_rank2: Option<bool>,
    /// The induced double cover of the curve is reducible.
    pub cover_reducible: Option<bool>,
    /// The two components meet generically transversally along the curve.
    pub transversal: Option<bool>,
}

pub fn graph_from_witnesses(
    components: &[ComponentWitness],
    curves: &[CurveWitness],
    hypotheses: Hypotheses,
) -> Result<DiscriminantGraph, BrauerError> {
    let mut provenance = Vec::new();
    let comps = components
        .iter()
        .map(|c| {
            let nontrivial = c.split_point.is_some() && c.nonsplit_point.is_some();
            provenance.push(match (&c.split_point, &c.nonsplit_point) {
                (Some(a), Some(b)) => format!("{}: split fiber over {a}, nonsplit fiber over {b}", c.name),
                _ => format!("{}: splitting witnesses incomplete", c.name),
            });
            Component { name: c.name.clone(), residue_nontrivial: nontrivial }
        })
        .collect();
    let mut out_curves = Vec::new();
    for c in curves {
        let rank2 = c
            .generic_rank2
            .ok_or_else(|| BrauerError::IncompleteWitness(format!("{}: no generic rank witness", c.name)))?;
        let transversal = c
            .transversal
            .ok_or_else(|| BrauerError::IncompleteWitness(format!("{}: no transversality witness", c.name)))?;
        let d = if rank2 { 0 } else { 1 };
        let square = if rank2 {
            c.cover_reducible
                .ok_or_else(|| BrauerError::IncompleteWitness(format!("{}: no double cover witness", c.name)))?
        } else {
            false
        };
        provenance.push(format!(
            "{}: generic fiber rank {}, double cover {}, transversal {}",
            c.name,
            if rank2 { 2 } else { 1 },
            if square { "reducible" } else { "irreducible or n/a" },
            transversal
        ));
        out_curves.push(Curve {
            i: c.i,
            j: c.j,
            name: c.name.clone(),
            d_i: d,
            d_j: d,
            restriction_i_square: square,
            restriction_j_square: square,
            transversal_rank2: transversal && rank2,
        });
    }
    let g = DiscriminantGraph { components: comps, curves: out_curves, hypotheses, provenance };
    g.validate()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(name: &str) -> Component {
        Component { name: name.into(), residue_nontrivial: true }
    }

    fn curve(i: usize, j: usize, d: (u8, u8), sq: bool) -> Curve {
        Curve {
            i,
            j,
            name: format!("C{i}{j}"),
            d_i: d.0,
            d_j: d.1,
            restriction_i_square: sq,
            restriction_j_square: sq,
            transversal_rank2: true,
        }
    }

    fn graph(n: usize, curves: Vec<Curve>) -> DiscriminantGraph {
        DiscriminantGraph {
            components: (0..n).map(|i| comp(&format!("S{i}"))).collect(),
            curves,
            hypotheses: Hypotheses::all(),
            provenance: vec![],
        }
    }

    #[test]
    fn two_components_exempt_curve() {
        let g = graph(2, vec![curve(0, 1, (0, 0), true)]);
        let h = g.compute_h().unwrap();
        assert_eq!(h.order_of_quotient, 2);
        assert!(h.equality_certified);
        assert!(g.corollary_check().unwrap());
    }

    #[test]
    fn irreducible_discriminant() {
        let h = graph(1, vec![]).compute_h().unwrap();
        assert_eq!(h.basis, vec!["1".to_string()]);
        assert_eq!(h.order_of_quotient, 1);
    }

    #[test]
    fn forced_equality() {
        let g = graph(2, vec![curve(0, 1, (1, 1), false)]);
        let h = g.compute_h().unwrap();
        assert_eq!(h.order_h, 2);
        assert_eq!(h.order_of_quotient, 1);
        assert_eq!(g.enumerate_h(), vec![0b00, 0b11]);
        assert!(!g.corollary_check().unwrap());
    }

    #[test]
    fn chain_of_three() {
        let g = graph(3, vec![curve(0, 1, (0, 0), true), curve(1, 2, (0, 0), true)]);
        assert_eq!(g.compute_h().unwrap().order_of_quotient, 4);
        assert!(g.corollary_check().unwrap());
    }

    #[test]
    fn mixed_residues_flagged() {
        let g = graph(2, vec![curve(0, 1, (1, 0), false)]);
        let h = g.compute_h().unwrap();
        assert_eq!(h.order_of_quotient, 2);
        assert_eq!(h.mixed_curves, vec!["C01".to_string()]);
    }

    #[test]
    fn errors() {
        let mut g = graph(2, vec![]);
        g.components[1].residue_nontrivial = false;
        assert!(matches!(g.compute_h(), Err(BrauerError::NotGoodDiscriminant(_))));
        let mut g = graph(2, vec![]);
        g.hypotheses.h4_factorial = false;
        assert!(matches!(g.compute_h(), Err(BrauerError::HypothesisViolated(_))));
        let g = graph(2, vec![curve(0, 0, (0, 0), true)]);
        assert!(matches!(g.compute_h(), Err(BrauerError::InvalidGraph(_))));
    }

    #[test]
    fn witnesses_missing_rank() {
        let c = vec![ComponentWitness { name: "A".into(), ..Default::default() }];
        let cw = vec![CurveWitness { i: 0, j: 1, name: "C".into(), ..Default::default() }];
        assert!(matches!(
            graph_from_witnesses(&c, &cw, Hypotheses::all()),
            Err(BrauerError::IncompleteWitness(_))
        ));
    }
}
