//! File formats (JSON records for forms, structures, witnesses and split
//! reports) and Graphviz DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{validate_form, Color, Generator, NormalForm};
use crate::frames::{AtomStructure, StructureBuilder, Valuation};
use crate::params::Params;
use crate::rewriter::FormSet;
use crate::splitter::{ExtendedStructure, SplitResult};
use crate::witness::WitnessStructure;

/// `{degree, color: [generator names], subs: [[form, ..] per direction]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    pub degree: usize,
    pub color: Vec<String>,
    #[serde(default)]
    pub subs: Vec<Vec<FormRecord>>,
}

impl FormRecord {
    pub fn from_form(f: &NormalForm) -> Self {
        FormRecord {
            degree: f.degree(),
            color: f.color().generators(f.dims()).map(Generator::name).collect(),
            subs: f.all_subs().iter().map(|set| set.iter().map(FormRecord::from_form).collect()).collect(),
        }
    }

    /// Converts and validates against the parameters. A degree-0 record may
    /// omit `subs`.
    pub fn to_form(&self, p: &Params) -> Result<NormalForm> {
        let f = self.convert(p)?;
        let diagnostics = validate_form(&f, p);
        if diagnostics.is_valid() {
            Ok(f)
        } else {
            Err(Error::InvalidForm(diagnostics.0.join("; ")))
        }
    }

    fn convert(&self, p: &Params) -> Result<NormalForm> {
        let gens = self.color.iter().map(|name| Generator::parse_name(name, p)).collect::<Result<Vec<_>>>()?;
        let color = Color::from_generators(gens, p.n);
        let subs = match self.subs.len() {
            0 => vec![Vec::new(); p.n],
            len if len == p.n => self
                .subs
                .iter()
                .map(|set| set.iter().map(|r| r.convert(p)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
            len => {
                return Err(Error::InvalidForm(format!("subs lists {len} directions, expected {}", p.n)));
            }
        };
        Ok(NormalForm::new(self.degree, color, subs))
    }
}

/// A form set: `{degree, forms: [form, ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSetRecord {
    pub degree: usize,
    pub forms: Vec<FormRecord>,
}

impl FormSetRecord {
    pub fn from_set(s: &FormSet) -> Self {
        FormSetRecord { degree: s.degree(), forms: s.iter().map(FormRecord::from_form).collect() }
    }

    pub fn to_set(&self, p: &Params) -> Result<FormSet> {
        let forms = self.forms.iter().map(|r| r.to_form(p)).collect::<Result<Vec<_>>>()?;
        FormSet::new(self.degree, forms)
    }
}

/// `{nodes: [names], T: [[pair, ..] per direction], E: [[names] per (i, j)]}`,
/// with `E` in row-major order of `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureRecord {
    pub nodes: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<(String, String)>>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<String>>,
}

impl StructureRecord {
    pub fn from_structure(s: &AtomStructure) -> Self {
        let name = |v: usize| s.name(v).to_string();
        StructureRecord {
            nodes: s.names().to_vec(),
            t: (0..s.n()).map(|i| s.pairs(i).iter().map(|&(a, b)| (name(a), name(b))).collect()).collect(),
            e: (0..s.n() * s.n()).map(|idx| s.e_members(idx / s.n(), idx % s.n()).into_iter().map(name).collect()).collect(),
        }
    }

    pub fn to_structure(&self) -> Result<AtomStructure> {
        let n = self.t.len();
        if n < 2 || self.e.len() != n * n {
            return Err(Error::InvalidStructure(format!(
                "{n} relations and {} diagonal sets do not describe a dimension >= 2",
                self.e.len()
            )));
        }
        let mut b = StructureBuilder::new(n);
        let mut index = BTreeMap::new();
        for name in &self.nodes {
            if index.insert(name.as_str(), b.add_node(name.clone())).is_some() {
                return Err(Error::InvalidStructure(format!("duplicate node `{name}`")));
            }
        }
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| Error::InvalidStructure(format!("unknown node `{name}`")))
        };
        for (i, pairs) in self.t.iter().enumerate() {
            for (a, c) in pairs {
                b.add_pair(i, lookup(a)?, lookup(c)?);
            }
        }
        for (idx, members) in self.e.iter().enumerate() {
            for name in members {
                b.set_e(idx / n, idx % n, lookup(name)?, true);
            }
        }
        Ok(b.build())
    }
}

fn valuation_record(s: &AtomStructure, e: &Valuation) -> Vec<Vec<String>> {
    (0..e.m()).map(|l| e.members(l).into_iter().map(|v| s.name(v).to_string()).collect()).collect()
}

/// A structure together with a valuation and a distinguished node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRecord {
    #[serde(flatten)]
    pub structure: StructureRecord,
    pub valuation: Vec<Vec<String>>,
    pub point: String,
}

impl ModelRecord {
    pub fn new(s: &AtomStructure, e: &Valuation, point: usize) -> Self {
        ModelRecord {
            structure: StructureRecord::from_structure(s),
            valuation: valuation_record(s, e),
            point: s.name(point).to_string(),
        }
    }
}

/// The structure format extended with levels, labels and the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    #[serde(flatten)]
    pub structure: StructureRecord,
    pub valuation: Vec<Vec<String>>,
    pub root: String,
    pub levels: Vec<Vec<String>>,
    /// Nodes of `S_{-1}`.
    pub representatives: Vec<String>,
    /// Nodes of attached support structures.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub support: Vec<String>,
    pub labels: BTreeMap<String, FormRecord>,
}

impl WitnessRecord {
    pub fn from_witness(w: &WitnessStructure) -> Self {
        let s = &w.structure;
        let name = |v: usize| s.name(v).to_string();
        WitnessRecord {
            structure: StructureRecord::from_structure(s),
            valuation: valuation_record(s, &w.valuation),
            root: name(w.root),
            levels: w.levels().into_iter().map(|l| l.into_iter().map(name).collect()).collect(),
            representatives: w.rep_nodes().map(name).collect(),
            support: w.support_nodes().map(name).collect(),
            labels: w.labeled_nodes().map(|v| (name(v), FormRecord::from_form(w.label(v).expect("labeled")))).collect(),
        }
    }
}

/// `{tau, sigma, gamma, certificates}` for one split.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitRecord {
    pub tau: FormRecord,
    pub sigma: FormRecord,
    pub gamma: FormRecord,
    pub divergence: Vec<bool>,
    pub sigma_certificate: WitnessRecord,
    pub gamma_certificate: ModelRecord,
}

impl SplitRecord {
    pub fn from_split(r: &SplitResult) -> Self {
        SplitRecord {
            tau: FormRecord::from_form(&r.tau),
            sigma: FormRecord::from_form(&r.sigma),
            gamma: FormRecord::from_form(&r.gamma),
            divergence: r.divergence.clone(),
            sigma_certificate: WitnessRecord::from_witness(&r.witness),
            gamma_certificate: extended_record(&r.extended, r.witness.root),
        }
    }
}

fn extended_record(x: &ExtendedStructure, root: usize) -> ModelRecord {
    ModelRecord::new(&x.structure, &x.valuation, root)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Reads either a single form or a form set.
pub fn parse_forms(text: &str, p: &Params) -> Result<FormSet> {
    if let Ok(set) = from_json::<FormSetRecord>(text) {
        return set.to_set(p);
    }
    let f = from_json::<FormRecord>(text)?.to_form(p)?;
    FormSet::new(f.degree(), [f])
}

fn edge_style(i: usize) -> &'static str {
    match i {
        0 => "dashed",
        1 => "dotted",
        _ => "solid",
    }
}

fn node_annotation(s: &AtomStructure, e: Option<&Valuation>, v: usize) -> String {
    let n = s.n();
    let mut parts: Vec<String> = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if s.in_e(i, j, v) {
                parts.push(format!("E{i}{j}"));
            }
        }
    }
    if let Some(e) = e {
        parts.extend((0..e.m()).filter(|&l| e.contains(l, v)).map(|l| format!("x{l}")));
    }
    parts.join(" ")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_node(out: &mut String, s: &AtomStructure, e: Option<&Valuation>, v: usize, indent: &str) {
    let note = node_annotation(s, e, v);
    let name = dot_escape(s.name(v));
    let label = if note.is_empty() { name.clone() } else { format!("{name}\\n{note}") };
    let _ = writeln!(out, "{indent}\"{name}\" [label=\"{label}\"];");
}

fn write_edges(out: &mut String, s: &AtomStructure) {
    for i in 0..s.n() {
        for &(a, b) in s.pairs(i) {
            if a < b {
                let _ = writeln!(
                    out,
                    "  \"{}\" -- \"{}\" [style={}, label=\"T{i}\"];",
                    dot_escape(s.name(a)),
                    dot_escape(s.name(b)),
                    edge_style(i)
                );
            }
        }
    }
}

/// Undirected graph of the non-reflexive `T_i` pairs: direction 0 dashed,
/// 1 dotted, others solid; nodes list their off-diagonal `E_ij` and variables.
pub fn structure_to_dot(s: &AtomStructure, e: Option<&Valuation>) -> String {
    let mut out = String::from("graph structure {\n  node [shape=circle];\n");
    for v in 0..s.len() {
        write_node(&mut out, s, e, v, "  ");
    }
    write_edges(&mut out, s);
    out.push_str("}\n");
    out
}

/// Like [`structure_to_dot`] with one band per level, one for `S_{-1}` and
/// one for support nodes.
pub fn witness_to_dot(w: &WitnessStructure) -> String {
    let s = &w.structure;
    let mut out = String::from("graph witness {\n  rankdir=TB;\n  node [shape=circle];\n");
    let mut bands: Vec<(String, Vec<usize>)> =
        w.levels().into_iter().enumerate().map(|(l, nodes)| (format!("S_{l}"), nodes)).collect();
    let reps: Vec<usize> = w.rep_nodes().collect();
    if !reps.is_empty() {
        bands.push(("S_-1".to_string(), reps));
    }
    let support: Vec<usize> = w.support_nodes().collect();
    if !support.is_empty() {
        bands.push(("support".to_string(), support));
    }
    for (idx, (label, nodes)) in bands.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{idx} {{\n    label=\"{label}\";\n    rank=same;");
        for &v in nodes {
            write_node(&mut out, s, Some(&w.valuation), v, "    ");
        }
        out.push_str("  }\n");
    }
    write_edges(&mut out, s);
    out.push_str("}\n");
    out
}
