//! The JSON model file: universe or variable declarations, named frames
//! (explicit blocks or variable subsets), named potentials, set
//! potentials, argumentation structures and Markov trees.
//!
//! Parsing keeps the raw serde representation so a loaded model can be
//! re-serialized deterministically (maps are ordered); validation resolves
//! every reference and reports the JSON path of the offending entry.
//! Syntactic errors carry serde_json's line and column.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fcf_core::frame::ElemSet;
use fcf_core::markov::MarkovTree;
use fcf_core::pas::{Assumption, Pas};
use fcf_core::{Frame, FrameRegistry, MultivariateModel, ProbPotential, SetPotential, Universe};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<RawVariable>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frames: BTreeMap<String, FrameSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub potentials: BTreeMap<String, RawPotential>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub set_potentials: BTreeMap<String, RawSetPotential>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pas: BTreeMap<String, RawPas>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub trees: BTreeMap<String, RawTree>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVariable {
    pub name: String,
    pub values: Vec<String>,
}

/// A frame is either an explicit list of atom blocks or a variable subset
/// of a multivariate model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum FrameSpec {
    Blocks(Vec<Vec<String>>),
    Vars { vars: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPotential {
    pub frame: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSetPotential {
    pub frame: String,
    pub masses: Vec<RawMass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMass {
    pub set: Vec<u32>,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPas {
    pub frame: String,
    pub assumptions: Vec<RawAssumption>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAssumption {
    pub name: String,
    pub weight: f64,
    pub image: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTree {
    pub nodes: BTreeMap<String, RawNode>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNode {
    pub frame: String,
    pub factor: String,
}

/// A validated model: the raw form plus every resolved object.
pub struct Model {
    pub raw: RawModel,
    pub universe: Universe,
    pub multivariate: Option<MultivariateModel>,
    pub registry: FrameRegistry,
    pub potentials: BTreeMap<String, ProbPotential>,
    pub set_potentials: BTreeMap<String, SetPotential>,
    pub pas: BTreeMap<String, Pas>,
    pub trees: BTreeMap<String, MarkovTree>,
    /// Frame id every named object lives on, for element-name parsing.
    pub frame_of: BTreeMap<String, String>,
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

pub fn parse_model(text: &str) -> Result<Model, CliError> {
    let raw: RawModel = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    validate(raw)
}

/// Deterministic serialization of the raw model (sorted object keys).
pub fn serialize_model(model: &Model) -> String {
    serde_json::to_string_pretty(&model.raw).expect("raw model serializes")
}

fn validate(raw: RawModel) -> Result<Model, CliError> {
    let fail = |path: &str, msg: String| Err(CliError::Validation(format!("{path}: {msg}")));
    if raw.version != 1 {
        return fail("version", format!("unsupported version {}", raw.version));
    }
    let (universe, multivariate) = match (&raw.universe, &raw.variables) {
        (Some(atoms), None) => {
            let u = Universe::new(atoms.clone())
                .map_err(|e| CliError::Validation(format!("universe: {e}")))?;
            (u, None)
        }
        (None, Some(vars)) => {
            let model = MultivariateModel::new(
                vars.iter()
                    .map(|v| (v.name.clone(), v.values.clone()))
                    .collect(),
            )
            .map_err(|e| CliError::Validation(format!("variables: {e}")))?;
            (model.universe().clone(), Some(model))
        }
        _ => {
            return fail(
                "model",
                "exactly one of \"universe\" or \"variables\" is required".into(),
            )
        }
    };

    let mut registry = FrameRegistry::new(universe.clone(), false);
    for (id, spec) in &raw.frames {
        let frame = match spec {
            FrameSpec::Blocks(blocks) => Frame::new(&universe, blocks)
                .map_err(|e| CliError::Validation(format!("frames.{id}: {e}")))?,
            FrameSpec::Vars { vars } => {
                let model = multivariate.as_ref().ok_or_else(|| {
                    CliError::Validation(format!(
                        "frames.{id}: variable frames require a multivariate model"
                    ))
                })?;
                model
                    .frame(&vars.iter().map(String::as_str).collect::<Vec<_>>())
                    .map_err(|e| CliError::Validation(format!("frames.{id}: {e}")))?
            }
        };
        registry
            .register(id.clone(), frame)
            .map_err(|e| CliError::Validation(format!("frames.{id}: {e}")))?;
    }

    let mut frame_of = BTreeMap::new();
    let mut claim = |name: &str, frame_id: &str, kind: &str| -> Result<(), CliError> {
        if frame_of.insert(name.to_string(), frame_id.to_string()).is_some() {
            return Err(CliError::Validation(format!(
                "{kind}.{name}: name already used by another object"
            )));
        }
        Ok(())
    };

    let mut potentials = BTreeMap::new();
    for (name, rp) in &raw.potentials {
        let path = format!("potentials.{name}");
        let frame = registry
            .get(&rp.frame)
            .ok_or_else(|| CliError::Validation(format!("{path}.frame: unknown frame {:?}", rp.frame)))?
            .clone();
        let p = ProbPotential::new(frame, rp.values.clone())
            .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        claim(name, &rp.frame, "potentials")?;
        potentials.insert(name.clone(), p);
    }

    let mut set_potentials = BTreeMap::new();
    for (name, rm) in &raw.set_potentials {
        let path = format!("set_potentials.{name}");
        let frame = registry
            .get(&rm.frame)
            .ok_or_else(|| CliError::Validation(format!("{path}.frame: unknown frame {:?}", rm.frame)))?
            .clone();
        let masses = rm
            .masses
            .iter()
            .map(|m| (m.set.iter().copied().collect::<ElemSet>(), m.mass));
        let sp = SetPotential::new(frame, masses)
            .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        claim(name, &rm.frame, "set_potentials")?;
        set_potentials.insert(name.clone(), sp);
    }

    let mut pas = BTreeMap::new();
    for (name, rp) in &raw.pas {
        let path = format!("pas.{name}");
        let frame = registry
            .get(&rp.frame)
            .ok_or_else(|| CliError::Validation(format!("{path}.frame: unknown frame {:?}", rp.frame)))?
            .clone();
        let assumptions = rp
            .assumptions
            .iter()
            .map(|a| Assumption {
                name: a.name.clone(),
                weight: a.weight,
                image: a.image.iter().copied().collect(),
            })
            .collect();
        let structure = Pas::new(frame, assumptions)
            .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        claim(name, &rp.frame, "pas")?;
        pas.insert(name.clone(), structure);
    }

    let mut trees = BTreeMap::new();
    for (name, rt) in &raw.trees {
        let path = format!("trees.{name}");
        let mut nodes = Vec::new();
        for (node_id, rn) in &rt.nodes {
            let frame = registry
                .get(&rn.frame)
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "{path}.nodes.{node_id}.frame: unknown frame {:?}",
                        rn.frame
                    ))
                })?
                .clone();
            let factor = potentials
                .get(&rn.factor)
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "{path}.nodes.{node_id}.factor: unknown potential {:?}",
                        rn.factor
                    ))
                })?
                .clone();
            nodes.push((node_id.clone(), frame, factor));
        }
        let tree = MarkovTree::new(nodes, rt.edges.iter().cloned())
            .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        trees.insert(name.clone(), tree);
    }

    Ok(Model {
        raw,
        universe,
        multivariate,
        registry,
        potentials,
        set_potentials,
        pas,
        trees,
        frame_of,
    })
}
