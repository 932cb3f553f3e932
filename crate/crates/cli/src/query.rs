//! Query verbs over a loaded model: parsing, execution, deterministic
//! rendering.
//!
//! Output is line-oriented text with sorted keys and 12-significant-digit
//! floats; identical queries produce byte-identical output across runs.

use clap::{Parser, Subcommand, ValueEnum};

use fcf_core::conditioning::{condition_on_event, conditional, factorization_equivalences};
use fcf_core::frame::{cond_independent, ElemSet, Frame};
use fcf_core::markov::{
    hugin, lauritzen_spiegelhalter, shenoy_shafer, verify_markov, RunOptions, TraceEntry,
};
use fcf_core::maxprod::mpe;
use fcf_core::oracle::{global_combine, oracle_marginal, oracle_mpe, DEFAULT_CAP};
use fcf_core::pas::Pas;
use fcf_core::{ProbPotential, SetPotential};

use crate::error::CliError;
use crate::fmt::fmt_f64;
use crate::model::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Arch {
    Ss,
    Ls,
    Hugin,
}

#[derive(Debug, Subcommand)]
pub enum QueryCmd {
    /// Node marginal of a Markov tree
    Marginal {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        node: String,
        #[arg(long, value_enum, default_value = "ss")]
        arch: Arch,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        trust_tree: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        normalize: bool,
    },
    /// Combine named objects of one kind (potentials, set potentials or
    /// argumentation structures)
    Combine {
        #[arg(required = true)]
        names: Vec<String>,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        oracle: bool,
    },
    /// Transport a named object to a frame
    Transport {
        name: String,
        frame: String,
        #[arg(long)]
        normalize: bool,
    },
    /// Normalize a potential or set potential
    Normalize { name: String },
    /// Degree of support of a subset (argumentation structure or set
    /// potential)
    Support { name: String, subset: String },
    /// Plausibility of a subset (set potential)
    Plausibility { name: String, subset: String },
    /// Conditional of a potential for a target frame given another frame
    Conditional {
        potential: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        given: String,
    },
    /// Condition a potential on set-potential evidence
    Condition { potential: String, evidence: String },
    /// Most probable configurations of a Markov-tree factorization
    Mpe {
        #[arg(long)]
        tree: String,
        #[arg(long, value_enum, default_value = "ss")]
        arch: Arch,
        #[arg(long)]
        one: bool,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        trust_tree: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Conditional independence of frames given a conditioning frame
    CheckCi {
        #[arg(required = true)]
        frames: Vec<String>,
        #[arg(long)]
        given: String,
    },
    /// Verify the Markov property of a tree
    VerifyTree { tree: String },
    /// Evaluate the eight factorization-equivalence statements
    EquivReport {
        potential: String,
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        #[arg(long)]
        given: String,
    },
}

#[derive(Debug, Parser)]
#[command(name = "query", no_binary_name = true)]
struct QueryArgs {
    #[command(subcommand)]
    cmd: QueryCmd,
}

/// Parses a pre-tokenized query and executes it against the model.
pub fn run_query<S: AsRef<str>>(model: &Model, args: &[S]) -> Result<String, CliError> {
    let tokens: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
    let parsed = QueryArgs::try_parse_from(&tokens)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = vec![format!("query: {}", tokens.join(" "))];
    execute(model, &parsed.cmd, &mut out)?;
    Ok(out.join("\n"))
}

/// Executes an already-parsed query, appending result lines.
pub fn execute(model: &Model, cmd: &QueryCmd, out: &mut Vec<String>) -> Result<(), CliError> {
    match cmd {
        QueryCmd::Marginal {
            tree,
            node,
            arch,
            root,
            trust_tree,
            oracle,
            trace,
            normalize,
        } => {
            let t = get(&model.trees, tree, "tree")?;
            let opts = RunOptions {
                root: root.clone(),
                trust_tree: *trust_tree,
            };
            let (by_node, trace_entries) = match arch {
                Arch::Ss => {
                    let m = shenoy_shafer(t, &opts)?;
                    (m.by_node, m.trace)
                }
                Arch::Ls => {
                    let m = lauritzen_spiegelhalter(t, &opts)?;
                    (m.by_node, m.trace)
                }
                Arch::Hugin => {
                    let m = hugin(t, &opts)?;
                    (m.marginals.by_node, m.marginals.trace)
                }
            };
            if *trace {
                render_trace(model, &trace_entries, out);
            }
            let mut marginal = by_node
                .get(node)
                .ok_or_else(|| CliError::Usage(format!("unknown node {node:?} in tree {tree:?}")))?
                .clone();
            if *normalize {
                marginal = marginal.normalize()?;
            }
            out.push(format!("node: {node}"));
            render_potential(model, &marginal, out);
            if *oracle {
                let global = global_combine(&t.factors(), oracle_cap())?;
                let mut expected = oracle_marginal(&global, marginal.label())?;
                if *normalize {
                    expected = expected.normalize()?;
                }
                out.push(format!(
                    "oracle_deviation={}",
                    fmt_f64(max_deviation(marginal.values(), expected.values()))
                ));
            }
        }

        QueryCmd::Combine {
            names,
            normalize,
            oracle,
        } => {
            let kinds: Vec<&str> = names.iter().map(|n| kind_of(model, n)).collect();
            if kinds.contains(&"unknown") {
                let missing = &names[kinds.iter().position(|k| *k == "unknown").unwrap()];
                return Err(CliError::Usage(format!("unknown object {missing:?}")));
            }
            if kinds.iter().any(|k| *k != kinds[0]) {
                return Err(CliError::Usage(
                    "combine requires objects of one kind".into(),
                ));
            }
            match kinds[0] {
                "potential" => {
                    let factors: Vec<ProbPotential> = names
                        .iter()
                        .map(|n| model.potentials[n].clone())
                        .collect();
                    let mut result = factors[0].clone();
                    for f in &factors[1..] {
                        result = result.combine(f)?;
                    }
                    if *normalize {
                        result = result.normalize()?;
                    }
                    render_potential(model, &result, out);
                    if *oracle {
                        let global = global_combine(&factors, oracle_cap())?;
                        let mut expected = global.potential().clone();
                        if *normalize {
                            expected = expected.normalize()?;
                        }
                        out.push(format!(
                            "oracle_deviation={}",
                            fmt_f64(max_deviation(result.values(), expected.values()))
                        ));
                    }
                }
                "set_potential" => {
                    let mut result = model.set_potentials[&names[0]].clone();
                    for n in &names[1..] {
                        result = result.combine(&model.set_potentials[n])?;
                    }
                    if *normalize {
                        let bpa = result.normalize()?;
                        render_set_potential(model, bpa.as_set_potential(), out);
                    } else {
                        render_set_potential(model, &result, out);
                    }
                }
                "pas" => {
                    let mut result = model.pas[&names[0]].clone();
                    for n in &names[1..] {
                        result = result.combine(&model.pas[n])?;
                    }
                    render_pas(model, &result, out);
                }
                _ => unreachable!(),
            }
        }

        QueryCmd::Transport {
            name,
            frame,
            normalize,
        } => {
            let target = frame_ref(model, frame)?;
            match kind_of(model, name) {
                "potential" => {
                    let mut p = model.potentials[name].transport(&target)?;
                    if *normalize {
                        p = p.normalize()?;
                    }
                    render_potential(model, &p, out);
                }
                "set_potential" => {
                    let m = model.set_potentials[name].transport(&target)?;
                    if *normalize {
                        let bpa = m.normalize()?;
                        render_set_potential(model, bpa.as_set_potential(), out);
                    } else {
                        render_set_potential(model, &m, out);
                    }
                }
                "pas" => {
                    let moved = model.pas[name].transport(&target)?;
                    render_pas(model, &moved, out);
                }
                _ => return Err(CliError::Usage(format!("unknown object {name:?}"))),
            }
        }

        QueryCmd::Normalize { name } => match kind_of(model, name) {
            "potential" => {
                let p = model.potentials[name].normalize()?;
                render_potential(model, &p, out);
            }
            "set_potential" => {
                let bpa = model.set_potentials[name].normalize()?;
                render_set_potential(model, bpa.as_set_potential(), out);
            }
            _ => return Err(CliError::Usage(format!("unknown potential {name:?}"))),
        },

        QueryCmd::Support { name, subset } => match kind_of(model, name) {
            "pas" => {
                let structure: &Pas = &model.pas[name];
                let set = parse_subset(model, name, structure.label(), subset)?;
                out.push(format!(
                    "support={}",
                    fmt_f64(structure.degree_of_support(&set)?)
                ));
            }
            "set_potential" => {
                let m: &SetPotential = &model.set_potentials[name];
                let set = parse_subset(model, name, m.label(), subset)?;
                out.push(format!("support={}", fmt_f64(m.support(&set)?)));
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "support needs an argumentation structure or set potential, got {name:?}"
                )))
            }
        },

        QueryCmd::Plausibility { name, subset } => match kind_of(model, name) {
            "set_potential" => {
                let m = &model.set_potentials[name];
                let set = parse_subset(model, name, m.label(), subset)?;
                out.push(format!("plausibility={}", fmt_f64(m.plausibility(&set)?)));
            }
            "pas" => {
                let m = model.pas[name].bpa();
                let set = parse_subset(model, name, model.pas[name].label(), subset)?;
                out.push(format!(
                    "plausibility={}",
                    fmt_f64(m.as_set_potential().plausibility(&set)?)
                ));
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "plausibility needs an argumentation structure or set potential, got {name:?}"
                )))
            }
        },

        QueryCmd::Conditional {
            potential,
            target,
            given,
        } => {
            let p = get(&model.potentials, potential, "potential")?;
            let t = frame_ref(model, target)?;
            let g = frame_ref(model, given)?;
            let c = conditional(p, &t, &g)?;
            render_potential(model, &c, out);
        }

        QueryCmd::Condition {
            potential,
            evidence,
        } => {
            let p = get(&model.potentials, potential, "potential")?;
            let m = get(&model.set_potentials, evidence, "set potential")?;
            let c = condition_on_event(p, m)?;
            render_potential(model, &c, out);
        }

        QueryCmd::Mpe {
            tree,
            arch,
            one,
            root,
            trust_tree,
            oracle,
            trace,
        } => {
            if *arch != Arch::Ss {
                return Err(CliError::Usage(
                    "mpe runs on the collect/distribute architecture only (--arch ss)".into(),
                ));
            }
            let t = get(&model.trees, tree, "tree")?;
            let opts = RunOptions {
                root: root.clone(),
                trust_tree: *trust_tree,
            };
            let result = mpe(t, &opts)?;
            if *trace {
                render_trace(model, &result.trace, out);
            }
            out.push(format!("value={}", fmt_f64(result.value)));
            let configs: Vec<u32> = if *one {
                result.configurations.iter().take(1).copied().collect()
            } else {
                result.configurations.iter().copied().collect()
            };
            for e in configs {
                out.push(render_element(model, &result.frame, e));
            }
            if *oracle {
                let global = global_combine(&t.factors(), oracle_cap())?;
                let (value, argmax) = oracle_mpe(&global);
                out.push(format!(
                    "oracle_deviation={}",
                    fmt_f64((result.value - value).abs())
                ));
                out.push(format!(
                    "oracle_configurations_match={}",
                    result.configurations == argmax
                ));
            }
        }

        QueryCmd::CheckCi { frames, given } => {
            let members: Vec<Frame> = frames
                .iter()
                .map(|f| frame_ref(model, f))
                .collect::<Result<_, _>>()?;
            let g = frame_ref(model, given)?;
            out.push(format!(
                "independent={}",
                cond_independent(&members, &g)?
            ));
        }

        QueryCmd::VerifyTree { tree } => {
            let t = get(&model.trees, tree, "tree")?;
            out.push(format!("markov={}", verify_markov(t)?));
        }

        QueryCmd::EquivReport {
            potential,
            t1,
            t2,
            given,
        } => {
            let p = get(&model.potentials, potential, "potential")?;
            let f1 = frame_ref(model, t1)?;
            let f2 = frame_ref(model, t2)?;
            let g = frame_ref(model, given)?;
            let report = factorization_equivalences(p, &f1, &f2, &g)?;
            for (i, value) in report.statements.iter().enumerate() {
                out.push(format!("statement{}={}", i + 1, value));
            }
            out.push(format!("all_equal={}", report.all_equal()));
            out.push(format!("all_true={}", report.all_true()));
        }
    }
    Ok(())
}

fn get<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    name: &str,
    kind: &str,
) -> Result<&'a T, CliError> {
    map.get(name)
        .ok_or_else(|| CliError::Usage(format!("unknown {kind} {name:?}")))
}

fn kind_of(model: &Model, name: &str) -> &'static str {
    if model.potentials.contains_key(name) {
        "potential"
    } else if model.set_potentials.contains_key(name) {
        "set_potential"
    } else if model.pas.contains_key(name) {
        "pas"
    } else {
        "unknown"
    }
}

fn frame_ref(model: &Model, id: &str) -> Result<Frame, CliError> {
    model
        .registry
        .get(id)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("unknown frame {id:?}")))
}

fn oracle_cap() -> usize {
    std::env::var("FCF_ORACLE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    fcf_core::approx::max_abs_deviation(a, b)
}

/// An element reference: a bare 0-based index, or the lowercased frame id
/// followed by a 1-based position (so `a1` is element 0 of frame `A`).
fn parse_element(
    frame_id: &str,
    frame: &Frame,
    token: &str,
) -> Result<u32, CliError> {
    let index = if let Ok(i) = token.parse::<u32>() {
        Some(i)
    } else {
        token
            .to_lowercase()
            .strip_prefix(&frame_id.to_lowercase())
            .and_then(|rest| rest.parse::<u32>().ok())
            .and_then(|k| k.checked_sub(1))
    };
    match index {
        Some(i) if (i as usize) < frame.len() => Ok(i),
        _ => Err(CliError::Usage(format!(
            "cannot resolve element {token:?} on frame {frame_id:?} with {} elements",
            frame.len()
        ))),
    }
}

/// A comma-separated subset of element references on the frame of a named
/// object.
fn parse_subset(
    model: &Model,
    object: &str,
    frame: &Frame,
    tokens: &str,
) -> Result<ElemSet, CliError> {
    let frame_id = model
        .frame_of
        .get(object)
        .map(String::as_str)
        .unwrap_or("");
    tokens.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_element(frame_id, frame, t.trim()))
        .collect()
}

/// Frame rendering: the registered id when one matches, otherwise the
/// block structure.
fn render_frame_label(model: &Model, frame: &Frame) -> String {
    for id in model.registry.ids() {
        if model.registry.get(id) == Some(frame) {
            return id.to_string();
        }
    }
    format!("{frame:?}")
}

/// Element rendering: a variable assignment in multivariate models (the
/// variables the element fixes), an atom set otherwise.
fn render_element(model: &Model, frame: &Frame, elem: u32) -> String {
    if let Some(mv) = &model.multivariate {
        let assigned = mv.constant_assignment(frame.block(elem));
        if !assigned.is_empty() {
            return assigned
                .into_iter()
                .map(|(var, val)| format!("{var}={val}"))
                .collect::<Vec<_>>()
                .join(",");
        }
    }
    frame.element_label(elem)
}

fn render_potential(model: &Model, p: &ProbPotential, out: &mut Vec<String>) {
    out.push(format!("frame: {}", render_frame_label(model, p.label())));
    for e in 0..p.len() as u32 {
        out.push(format!(
            "{}: {}",
            render_element(model, p.label(), e),
            fmt_f64(p.value(e))
        ));
    }
}

fn render_set_potential(model: &Model, m: &SetPotential, out: &mut Vec<String>) {
    out.push(format!("frame: {}", render_frame_label(model, m.label())));
    for (set, mass) in m.focal_sets() {
        let indices: Vec<String> = set.iter().map(u32::to_string).collect();
        out.push(format!("mass([{}])={}", indices.join(","), fmt_f64(mass)));
    }
}

fn render_pas(model: &Model, p: &Pas, out: &mut Vec<String>) {
    out.push(format!("frame: {}", render_frame_label(model, p.label())));
    for a in p.assumptions() {
        let image: Vec<String> = a.image.iter().map(u32::to_string).collect();
        out.push(format!(
            "assumption {}: weight={} image=[{}]",
            a.name,
            fmt_f64(a.weight),
            image.join(",")
        ));
    }
}

fn render_trace(model: &Model, entries: &[TraceEntry], out: &mut Vec<String>) {
    for entry in entries {
        let values: Vec<String> = entry.potential.values().iter().map(|&v| fmt_f64(v)).collect();
        out.push(format!(
            "MSG {}->{} label={} values=[{}]",
            entry.from,
            entry.to,
            render_frame_label(model, entry.potential.label()),
            values.join(", ")
        ));
    }
}
