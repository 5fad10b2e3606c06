//! JSON forms of relations, networks, projections, points, choice data and results.

use std::fs;
use std::path::Path;

use orderflow_core::{
    BayesReport, ChoiceData, MleFit, Network, OrderKind, PairCounts, PairVector, ProjectionMap,
    Relation, SolveResult, Termination,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl RelationJson {
    pub fn from_relation(r: &Relation) -> Self {
        Self {
            n: r.n(),
            pairs: r.pairs().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_relation(&self) -> Result<Relation, CliError> {
        Ok(Relation::from_pairs(
            self.n,
            self.pairs.iter().map(|&[i, j]| (i, j)),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairValue {
    pub i: usize,
    pub j: usize,
    pub p: f64,
}

/// A point of pair space; missing pairs are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub n: usize,
    pub pairs: Vec<PairValue>,
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<(), CliError> {
    if i == j || i >= n || j >= n {
        return Err(CliError::Input(format!(
            "pair ({i}, {j}) is not valid for n = {n}"
        )));
    }
    Ok(())
}

impl PointJson {
    pub fn from_vector(p: &PairVector) -> Self {
        Self {
            n: p.n(),
            pairs: p.iter().map(|(i, j, p)| PairValue { i, j, p }).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<PairVector, CliError> {
        let mut v = PairVector::zeros(self.n);
        for e in &self.pairs {
            check_pair(self.n, e.i, e.j)?;
            if !e.p.is_finite() {
                return Err(CliError::Input(format!(
                    "value for ({}, {}) is not finite",
                    e.i, e.j
                )));
            }
            v.set(e.i, e.j, e.p);
        }
        Ok(v)
    }
}

/// Either a point or a relation, the latter standing for its characteristic vector.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PointInput {
    Point(PointJson),
    Relation(RelationJson),
}

impl PointInput {
    pub fn to_vector(&self) -> Result<PairVector, CliError> {
        match self {
            PointInput::Point(p) => p.to_vector(),
            PointInput::Relation(r) => Ok(orderflow_core::characteristic_vector(&r.to_relation()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCountsJson {
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub chose_j: u64,
    #[serde(default)]
    pub chose_i: u64,
    #[serde(default)]
    pub indifferent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceDataJson {
    pub n: usize,
    #[serde(default)]
    pub pairs: Vec<PairCountsJson>,
}

impl ChoiceDataJson {
    /// Pairs with at least one response, each with `i < j`.
    pub fn from_data(data: &ChoiceData) -> Self {
        Self {
            n: data.n(),
            pairs: data
                .iter()
                .filter(|(_, _, c)| c.total() > 0)
                .map(|(i, j, c)| PairCountsJson {
                    i,
                    j,
                    chose_j: c.chose_j,
                    chose_i: c.chose_i,
                    indifferent: c.indifferent,
                })
                .collect(),
        }
    }

    /// A pair listed as `(j, i)` is read from `j`'s side.
    pub fn to_data(&self) -> Result<ChoiceData, CliError> {
        let mut data = ChoiceData::new(self.n);
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.pairs {
            check_pair(self.n, e.i, e.j)?;
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(CliError::Input(format!(
                    "pair ({}, {}) listed twice",
                    e.i, e.j
                )));
            }
            data.set(
                e.i,
                e.j,
                PairCounts::new(e.chose_j, e.chose_i, e.indifferent),
            );
        }
        Ok(data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub pairs: Vec<[usize; 2]>,
    pub rows: Vec<Vec<usize>>,
}

impl ProjectionJson {
    pub fn from_map(map: &ProjectionMap) -> Self {
        Self {
            pairs: orderflow_core::pairs(map.n())
                .map(|(i, j)| [i, j])
                .collect(),
            rows: map.rows().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub n: usize,
    pub kind: String,
    pub nodes: Vec<String>,
    pub arcs: Vec<[usize; 2]>,
    pub source: usize,
    pub sink: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionJson>,
}

impl NetworkJson {
    pub fn from_network(net: &Network, proj: Option<&ProjectionMap>) -> Self {
        Self {
            n: net.n(),
            kind: net.kind().code().to_string(),
            nodes: net.nodes().iter().map(ToString::to_string).collect(),
            arcs: net.arcs().map(|a| [a.tail, a.head]).collect(),
            source: net.source(),
            sink: net.sink(),
            projection: proj.map(ProjectionJson::from_map),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivePath {
    pub arcs: Vec<usize>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResultJson {
    pub n: usize,
    pub kind: String,
    pub objective: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub p: Vec<PairValue>,
    pub active: Vec<ActivePath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_likelihood: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inside: Option<bool>,
}

impl SolveResultJson {
    pub fn from_result(kind: OrderKind, res: &SolveResult) -> Self {
        Self {
            n: res.point.n(),
            kind: kind.code().to_string(),
            objective: res.objective,
            gap: res.gap,
            iterations: res.iterations,
            converged: res.termination != Termination::MaxIterations,
            p: PointJson::from_vector(&res.point).pairs,
            active: res
                .active
                .iter()
                .map(|a| ActivePath {
                    arcs: a.path.arcs().to_vec(),
                    weight: a.weight,
                })
                .collect(),
            log_likelihood: None,
            distance: None,
            inside: None,
        }
    }

    pub fn from_fit(kind: OrderKind, fit: &MleFit) -> Self {
        Self {
            log_likelihood: Some(fit.log_likelihood),
            ..Self::from_result(kind, &fit.result)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesReportJson {
    pub n: usize,
    pub kind: String,
    pub seed: u64,
    pub samples: u64,
    pub prior_hits: u64,
    pub posterior_hits: u64,
    pub prior_proportion: f64,
    pub posterior_proportion: f64,
    /// Absent when no prior draw fell inside.
    pub bayes_factor: Option<f64>,
    pub mc_stderr: Option<f64>,
}

impl BayesReportJson {
    pub fn from_report(n: usize, kind: OrderKind, seed: u64, r: &BayesReport) -> Self {
        Self {
            n,
            kind: kind.code().to_string(),
            seed,
            samples: r.samples,
            prior_hits: r.prior_hits,
            posterior_hits: r.posterior_hits,
            prior_proportion: r.prior_proportion,
            posterior_proportion: r.posterior_proportion,
            bayes_factor: Some(r.bayes_factor),
            mc_stderr: Some(r.mc_stderr),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
