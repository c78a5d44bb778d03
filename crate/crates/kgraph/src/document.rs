//! The `kg-doc/1` JSON document: a row system and a list of graphs.
//!
//! Graphs are stored in canonical form and listed in canonical order, so ids
//! do not depend on how the graphs were found.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use kgraph_core::exactalg::{IntMatrix, RowSystem, SystemError};
use kgraph_core::tiling::PrimalityVerdict;
use kgraph_core::vgraph::{
    canonicalize, chiral, is_self_chiral, multiplicity, Coord, EdgeInstance, GraphError, VectorGraph,
};

pub const SCHEMA: &str = "kg-doc/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEcho {
    #[serde(rename = "R")]
    pub r: Vec<Vec<i64>>,
    #[serde(rename = "N")]
    pub null: Vec<Vec<i64>>,
    pub q: i64,
    pub k: usize,
    pub n: usize,
}

impl SystemEcho {
    pub fn of(sys: &RowSystem) -> Self {
        SystemEcho {
            r: sys.row_matrix().to_rows(),
            null: sys.null_matrix().to_rows(),
            q: sys.q(),
            k: sys.k(),
            n: sys.n(),
        }
    }

    /// Rebuilds the system from `q` and the `C` block of `R`, then checks
    /// that everything echoed matches.
    pub fn to_system(&self) -> Result<RowSystem, DocumentError> {
        let c: Vec<Vec<i64>> = self
            .r
            .iter()
            .map(|row| row.get(self.k..).map(<[i64]>::to_vec).unwrap_or_default())
            .collect();
        let c = IntMatrix::from_rows(&c).ok_or(DocumentError::Inconsistent("R is not rectangular"))?;
        let sys = RowSystem::from_blocks(self.q, c)?;
        if SystemEcho::of(&sys) != *self {
            return Err(DocumentError::Inconsistent("R, N, q, k, n do not describe one system"));
        }
        Ok(sys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeLabel {
    Prime,
    Composite,
    Unknown,
}

impl From<&PrimalityVerdict> for PrimeLabel {
    fn from(v: &PrimalityVerdict) -> Self {
        match v {
            PrimalityVerdict::Prime => PrimeLabel::Prime,
            PrimalityVerdict::Composite { .. } => PrimeLabel::Composite,
            PrimalityVerdict::Unknown => PrimeLabel::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub tail: usize,
    pub head: usize,
    pub vec_index: usize,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub id: usize,
    pub vertices: Vec<Vec<i64>>,
    pub edges: Vec<EdgeRecord>,
    pub multiplicity: Option<u32>,
    pub self_chiral: bool,
    /// Id of the chiral image within this document (its own id when self-chiral).
    pub chiral_of: Option<usize>,
    /// Absent unless primality was requested.
    pub prime: Option<PrimeLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema: String,
    pub system: SystemEcho,
    pub m_max: Option<u32>,
    pub complete: bool,
    pub graphs: Vec<GraphRecord>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("inconsistent document: {0}")]
    Inconsistent(&'static str),
    #[error("graph {id}: vertex index {index} out of range")]
    VertexIndex { id: usize, index: usize },
    #[error("graph {id}: {source}")]
    Graph { id: usize, source: GraphError },
    #[error(transparent)]
    System(#[from] SystemError),
}

fn record(id: usize, g: &VectorGraph) -> GraphRecord {
    let vertices = g.vertices();
    let index: BTreeMap<&Coord, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges = g
        .edges()
        .map(|(e, count)| EdgeRecord {
            tail: index[&e.tail],
            head: index[&e.head],
            vec_index: e.vec_index,
            count,
        })
        .collect();
    GraphRecord {
        id,
        vertices: vertices.iter().map(|v| v.to_vec()).collect(),
        edges,
        multiplicity: multiplicity(g).m,
        self_chiral: is_self_chiral(g),
        chiral_of: None,
        prime: None,
    }
}

impl GraphDocument {
    /// Canonicalises, sorts and deduplicates `graphs`, then fills in chirality.
    pub fn new<'a, I>(sys: &RowSystem, graphs: I, m_max: Option<u32>, complete: bool) -> Self
    where
        I: IntoIterator<Item = &'a VectorGraph>,
    {
        let canon: std::collections::BTreeSet<VectorGraph> = graphs.into_iter().map(canonicalize).collect();
        let ids: BTreeMap<&VectorGraph, usize> = canon.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let graphs = canon
            .iter()
            .enumerate()
            .map(|(id, g)| {
                let mut r = record(id, g);
                r.chiral_of = ids.get(&chiral(g)).copied();
                r
            })
            .collect();
        GraphDocument {
            schema: SCHEMA.to_string(),
            system: SystemEcho::of(sys),
            m_max,
            complete,
            graphs,
        }
    }

    /// Attaches primality labels in id order.
    pub fn set_primality(&mut self, verdicts: &[PrimalityVerdict]) {
        for (r, v) in self.graphs.iter_mut().zip(verdicts) {
            r.prime = Some(v.into());
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        if doc.schema != SCHEMA {
            return Err(DocumentError::Schema(doc.schema));
        }
        Ok(doc)
    }

    /// The system and graphs, in id order; edge geometry is re-checked.
    pub fn to_graphs(&self) -> Result<(Arc<RowSystem>, Vec<VectorGraph>), DocumentError> {
        let sys = Arc::new(self.system.to_system()?);
        let graphs = self
            .graphs
            .iter()
            .map(|r| graph_of(&sys, r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((sys, graphs))
    }

    pub fn summary(&self) -> Summary {
        let self_chiral = self.graphs.iter().filter(|g| g.self_chiral).count();
        let pairs = self
            .graphs
            .iter()
            .filter(|g| !g.self_chiral && g.chiral_of.is_some_and(|c| c > g.id))
            .count();
        let primes = self
            .graphs
            .iter()
            .any(|g| g.prime.is_some())
            .then(|| self.graphs.iter().filter(|g| g.prime == Some(PrimeLabel::Prime)).count());
        Summary {
            graphs: self.graphs.len(),
            self_chiral,
            chiral_pairs: pairs,
            primes,
        }
    }
}

pub fn graph_of(sys: &Arc<RowSystem>, r: &GraphRecord) -> Result<VectorGraph, DocumentError> {
    let vertex = |index: usize| {
        r.vertices
            .get(index)
            .map(|v| Coord(v.clone()))
            .ok_or(DocumentError::VertexIndex { id: r.id, index })
    };
    let mut edges = Vec::with_capacity(r.edges.len());
    for e in &r.edges {
        edges.push((
            EdgeInstance {
                tail: vertex(e.tail)?,
                head: vertex(e.head)?,
                vec_index: e.vec_index,
            },
            e.count,
        ));
    }
    VectorGraph::from_instances(sys.clone(), edges).map_err(|source| DocumentError::Graph { id: r.id, source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub graphs: usize,
    pub self_chiral: usize,
    pub chiral_pairs: usize,
    pub primes: Option<usize>,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} graphs; {} self-chiral; {} chiral pairs",
            self.graphs, self.self_chiral, self.chiral_pairs
        )?;
        if let Some(p) = self.primes {
            write!(f, "; {p} prime")?;
        }
        Ok(())
    }
}
