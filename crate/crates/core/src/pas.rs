//! Probabilistic argumentation structures: weighted assumptions, each
//! implying a nonempty subset of a frame (precise when every image is a
//! singleton).
//!
//! Combination pairs the assumptions of two structures, keeps the pairs
//! whose transported images intersect in the join frame, renormalizes the
//! product weights by the retained mass and intersects the images. The
//! induced basic probability assignment turns this into Dempster's rule.

use crate::approx::ABS_TOL;
use crate::error::{FcfError, Result};
use crate::frame::{join2, transport_set, ElemSet, Frame};
use crate::setpot::{Bpa, SetPotential};

/// One assumption: an opaque label, a probability weight and the implied
/// subset of the frame.
#[derive(Clone, Debug)]
pub struct Assumption {
    pub name: String,
    pub weight: f64,
    pub image: ElemSet,
}

/// A finite assumption space with a probability distribution and a map
/// from assumptions to nonempty subsets of the labeling frame.
#[derive(Clone, Debug)]
pub struct Pas {
    label: Frame,
    assumptions: Vec<Assumption>,
}

impl Pas {
    /// Validates weights (nonnegative, summing to one within 1e-12) and
    /// images (nonempty subsets of the frame).
    pub fn new(label: Frame, assumptions: Vec<Assumption>) -> Result<Pas> {
        let mut sum = 0.0;
        for a in &assumptions {
            if a.weight < 0.0 {
                return Err(FcfError::InvalidWeights(a.weight));
            }
            sum += a.weight;
            if a.image.is_empty() {
                return Err(FcfError::EmptyImage(a.name.clone()));
            }
            label.check_subset(&a.image)?;
        }
        if (sum - 1.0).abs() > ABS_TOL {
            return Err(FcfError::InvalidWeights(sum));
        }
        Ok(Pas { label, assumptions })
    }

    /// A deterministic structure: one sure assumption implying `image`.
    pub fn deterministic(label: Frame, image: ElemSet) -> Result<Pas> {
        Pas::new(
            label,
            vec![Assumption {
                name: "*".into(),
                weight: 1.0,
                image,
            }],
        )
    }

    /// The vacuous structure: one sure assumption implying the full frame.
    pub fn vacuous(label: Frame) -> Pas {
        let image = label.full_set();
        Pas {
            label: label.clone(),
            assumptions: vec![Assumption {
                name: "*".into(),
                weight: 1.0,
                image,
            }],
        }
    }

    pub fn label(&self) -> &Frame {
        &self.label
    }

    pub fn assumptions(&self) -> &[Assumption] {
        &self.assumptions
    }

    /// True when every image is a singleton.
    pub fn is_precise(&self) -> bool {
        self.assumptions.iter().all(|a| a.image.len() == 1)
    }

    /// The assumptions whose image implies `hypothesis` (is contained in
    /// it); for precise structures this is exactly membership of the
    /// implied element.
    pub fn support_set(&self, hypothesis: &ElemSet) -> Result<Vec<usize>> {
        self.label.check_subset(hypothesis)?;
        Ok(self
            .assumptions
            .iter()
            .enumerate()
            .filter(|(_, a)| a.image.is_subset(hypothesis))
            .map(|(i, _)| i)
            .collect())
    }

    /// Total weight of the supporting assumptions.
    pub fn degree_of_support(&self, hypothesis: &ElemSet) -> Result<f64> {
        Ok(self
            .support_set(hypothesis)?
            .into_iter()
            .map(|i| self.assumptions[i].weight)
            .sum())
    }

    /// The induced basic probability assignment: each subset carries the
    /// total weight of the assumptions implying exactly it.
    pub fn bpa(&self) -> Bpa {
        let masses = self
            .assumptions
            .iter()
            .map(|a| (a.image.clone(), a.weight));
        let potential =
            SetPotential::new(self.label.clone(), masses).expect("weights validated nonnegative");
        Bpa::new_unchecked(potential)
    }

    /// Independent combination: consistent assumption pairs with product
    /// weights renormalized by the retained mass, images intersected in
    /// the join frame. Fails when every pair is contradictory.
    pub fn combine(&self, other: &Pas) -> Result<Pas> {
        let joined = join2(&self.label, &other.label)?;
        let gen_self: Vec<u32> = (0..joined.len() as u32)
            .map(|e| self.label.element_of_atom(joined.block(e)[0]))
            .collect();
        let gen_other: Vec<u32> = (0..joined.len() as u32)
            .map(|e| other.label.element_of_atom(joined.block(e)[0]))
            .collect();
        let mut combined = Vec::new();
        let mut k = 0.0;
        for a1 in &self.assumptions {
            for a2 in &other.assumptions {
                let image: ElemSet = (0..joined.len() as u32)
                    .filter(|&e| {
                        a1.image.contains(&gen_self[e as usize])
                            && a2.image.contains(&gen_other[e as usize])
                    })
                    .collect();
                if image.is_empty() {
                    continue;
                }
                let weight = a1.weight * a2.weight;
                k += weight;
                combined.push(Assumption {
                    name: format!("({},{})", a1.name, a2.name),
                    weight,
                    image,
                });
            }
        }
        if k <= 0.0 {
            return Err(FcfError::Contradiction(
                "contradictory argumentation structures: no consistent assumption pair".into(),
            ));
        }
        for a in &mut combined {
            a.weight /= k;
        }
        Ok(Pas {
            label: joined,
            assumptions: combined,
        })
    }

    /// Transport: same assumptions and weights, images transported; for a
    /// coarsening of the label and a precise structure this is projection
    /// and stays precise.
    pub fn transport(&self, to: &Frame) -> Result<Pas> {
        let assumptions = self
            .assumptions
            .iter()
            .map(|a| {
                Ok(Assumption {
                    name: a.name.clone(),
                    weight: a.weight,
                    image: transport_set(&self.label, &a.image, to)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Pas {
            label: to.clone(),
            assumptions,
        })
    }
}
