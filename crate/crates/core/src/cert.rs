//! Certificates: a search result together with enough data to re-check it
//! without searching again.
//!
//! Universal claims ("every colouring has a witness") have no short
//! witness; for those the stored verdict is re-derived by running the
//! complete solver again under the stored budget.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::amalgam::{check_dominating, Amalgam, InverseSequence};
use crate::chains::{multinomial, ChainEpi, ChainedFan};
use crate::duality::{verify_duality_map, DualityReport};
use crate::epi::{FanEpi, Mode};
use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex};
use crate::fan_ramsey::{compose_maps, GroundTruth, HomSet, RamseyCertificate, RamseyVerdict, MODE};
use crate::metrics::{check_nakr_hypotheses, fibre_containment, image_chain, set_chain, MergeResult};
use crate::ramsey::{
    escapes_all, find_bad_colouring, gr_hypergraph, is_size_determined, lelek_hypergraph, set_from_members,
    verify_lelek_witness, BlockDomain, Colouring, Hypergraph, LelekParams, LelekWitness, LevelVerdict, NumberSearch,
    SetTupleDomain, SolveOutcome,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub params: Value,
    pub verdict: String,
    pub witness: Value,
    pub verified: bool,
    pub budget: Value,
    pub tool_version: String,
    pub seed: u64,
}

impl Certificate {
    pub fn new<P: Serialize, W: Serialize>(kind: &str, params: &P, verdict: &str, witness: &W, budget: Value, seed: u64) -> Result<Certificate> {
        Ok(Certificate {
            kind: kind.to_string(),
            params: to_value(params)?,
            verdict: verdict.to_string(),
            witness: to_value(witness)?,
            verified: false,
            budget,
            tool_version: TOOL_VERSION.to_string(),
            seed,
        })
    }

    /// Runs [`verify`] and records the outcome.
    pub fn verified(mut self) -> Result<Certificate> {
        self.verified = verify(&self)?;
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("certificate: {e}")))
    }

    fn budget_nodes(&self) -> u64 {
        self.budget.get("nodes").and_then(Value::as_u64).unwrap_or(50_000_000)
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

fn from_value<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}

// Parameter and witness shapes per kind.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainCountParams {
    pub branches: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainCountWitness {
    pub count: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityParams {
    pub source: Fan,
    pub target: Fan,
    pub map: Vec<Vertex>,
    pub relation: Mode,
    pub chains: Option<(ChainedFan, ChainedFan)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmalgamParams {
    pub f: ChainEpi,
    pub g: ChainEpi,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverParams {
    pub target: ChainedFan,
    pub mode: Mode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenericParams {
    pub catalog_max_vertices: usize,
    pub up_to_level: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrParams {
    pub k: usize,
    pub l: usize,
    pub r: u8,
    pub n_max: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LelekNumberParams {
    #[serde(flatten)]
    pub params: LelekParams,
    pub r: u8,
    pub n_max: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SizedParams {
    pub d: usize,
    pub ks: Vec<usize>,
    pub ls: Vec<usize>,
    pub r: u8,
    pub n_max: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LelekWitnessCert {
    pub colouring: Colouring,
    pub witness: LelekWitness,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SizedWitnessParams {
    pub ground: usize,
    pub ks: Vec<usize>,
    pub d: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SizedWitness {
    pub colouring: Colouring,
    pub bases: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanRamseyParams {
    pub s: ChainedFan,
    pub t: ChainedFan,
    pub u: ChainedFan,
    pub r: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanRamseyWitness {
    pub colouring: Colouring,
    pub certificate: RamseyCertificate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NakrParams {
    pub source: Fan,
    pub target: Fan,
    pub phi: Vec<Vertex>,
    pub mode: Mode,
    pub c: ChainedFan,
    pub d: ChainedFan,
}

/// Re-checks a certificate from its stored data.
pub fn verify(cert: &Certificate) -> Result<bool> {
    let p = &cert.params;
    let w = &cert.witness;
    match cert.kind.as_str() {
        "chains-count" => {
            let p: ChainCountParams = from_value(p, "params")?;
            let w: ChainCountWitness = from_value(w, "witness")?;
            Ok(multinomial(&p.branches) == w.count as u128)
        }
        "duality" => {
            let p: DualityParams = from_value(p, "params")?;
            let w: DualityReport = from_value(w, "witness")?;
            let chains = p.chains.as_ref().map(|(b, a)| (b, a));
            let again = verify_duality_map(&p.map, &p.source, &p.target, chains, p.relation)?;
            Ok(again == w && (cert.verdict == "pass") == w.pass)
        }
        "amalgam" => {
            let p: AmalgamParams = from_value(p, "params")?;
            let w: Amalgam = from_value(w, "witness")?;
            let left = p.f.compose(&w.k)?;
            let right = p.g.compose(&w.l)?;
            Ok(w.k.source() == &w.e && w.l.source() == &w.e && left.map() == right.map())
        }
        "coinitial" | "expansion" => {
            let p: CoverParams = from_value(p, "params")?;
            let w: ChainEpi = from_value(w, "witness")?;
            let shape_ok = if cert.kind == "coinitial" {
                let info = crate::chains::canonical_structure(w.source());
                info.in_fcc
            } else {
                true
            };
            Ok(w.target() == &p.target && w.mode() == p.mode && shape_ok)
        }
        "generic" => {
            let p: GenericParams = from_value(p, "params")?;
            let mut seq: InverseSequence = from_value(w, "witness")?;
            seq.validate()?;
            let catalog = crate::amalgam::chained_catalog(p.catalog_max_vertices);
            let report = check_dominating(&seq, &catalog, p.up_to_level.min(seq.depth() - 1))?;
            Ok(report.pass)
        }
        "gr" => {
            let p: GrParams = from_value(p, "params")?;
            let w: NumberSearch = from_value(w, "witness")?;
            verify_number_search(&w, p.r, cert.budget_nodes(), |n| Ok(gr_hypergraph(p.k, p.l, n).1))
        }
        "lelek-number" => {
            let p: LelekNumberParams = from_value(p, "params")?;
            let w: NumberSearch = from_value(w, "witness")?;
            verify_number_search(&w, p.r, cert.budget_nodes(), |n| Ok(lelek_hypergraph(&p.params, n)?.1))
        }
        "size-determined-number" => {
            let p: SizedParams = from_value(p, "params")?;
            let w: NumberSearch = from_value(w, "witness")?;
            verify_number_search(&w, p.r, cert.budget_nodes(), |ground| {
                let domain = SetTupleDomain::new(ground, &p.ks, p.d, 5_000_000)?;
                let groups = if p.ls.iter().any(|&l| l > ground) {
                    Vec::new()
                } else {
                    crate::ramsey::base_tuples(ground, &p.ls)
                        .iter()
                        .map(|bs| crate::ramsey::size_classes(&domain, bs, None))
                        .collect()
                };
                Ok(Hypergraph {
                    vertices: domain.len(),
                    groups,
                })
            })
        }
        "lelek" => {
            let w: LelekWitnessCert = from_value(w, "witness")?;
            let domain = BlockDomain::new(w.witness.params.k, w.witness.params.d, w.witness.n);
            if !w.colouring.is_valid(domain.len()) {
                return Ok(false);
            }
            verify_lelek_witness(&domain, &w.colouring, &w.witness)
        }
        "size-determined" => {
            let p: SizedWitnessParams = from_value(p, "params")?;
            let w: SizedWitness = from_value(w, "witness")?;
            let domain = SetTupleDomain::new(p.ground, &p.ks, p.d, 5_000_000)?;
            if !w.colouring.is_valid(domain.len()) || w.bases.len() != p.ks.len() {
                return Ok(false);
            }
            let bases: Vec<_> = w.bases.iter().map(|b| set_from_members(b)).collect();
            Ok(is_size_determined(&domain, &w.colouring, &bases))
        }
        "ramsey-fan" => {
            let p: FanRamseyParams = from_value(p, "params")?;
            match cert.verdict.as_str() {
                "found" => {
                    let w: FanRamseyWitness = from_value(w, "witness")?;
                    verify_fan_witness(&p, &w)
                }
                "refuted" => {
                    let c: Colouring = from_value(w, "witness")?;
                    let truth = GroundTruth::new(&p.s, &p.t, &p.u)?;
                    Ok(c.is_valid(truth.hom_us) && truth.monochromatic_g(&c).is_none())
                }
                _ => {
                    let v: RamseyVerdict = from_value(w, "witness")?;
                    let again = crate::fan_ramsey::verify_ramsey_instance(&p.s, &p.t, &p.u, p.r, cert.budget_nodes(), cert.seed)?;
                    Ok(again == v)
                }
            }
        }
        "nakr" => {
            let p: NakrParams = from_value(p, "params")?;
            let w: MergeResult = from_value(w, "witness")?;
            let phi = FanEpi::new(p.source.clone(), p.target.clone(), p.phi.clone(), p.mode)?;
            check_nakr_hypotheses(&phi, &p.c, &p.d)?;
            let (cs, ds) = (set_chain(&p.c), set_chain(&p.d));
            let equal = image_chain(&w.psi, &cs) == image_chain(&w.psi, &ds);
            let contained = fibre_containment(&p.phi, &w.psi, &p.target);
            let epi = w.psi.len() == p.source.vertex_count()
                && crate::epi::is_epimorphism(&w.psi, &p.source, &p.target, p.mode)?;
            Ok(equal && contained && epi)
        }
        other => Err(Error::InvalidInput(format!("unknown certificate kind {other:?}"))),
    }
}

fn verify_fan_witness(p: &FanRamseyParams, w: &FanRamseyWitness) -> Result<bool> {
    let hom_us = HomSet::new(&p.u, &p.s);
    let hom_ts = HomSet::new(&p.t, &p.s);
    if !w.colouring.is_valid(hom_us.len()) {
        return Ok(false);
    }
    let g = &w.certificate.g;
    if !crate::chains::is_chain_epimorphism_map(g, &p.u, &p.t, MODE)? {
        return Ok(false);
    }
    for h in &hom_ts.maps {
        match hom_us.index_of(&compose_maps(h, g)) {
            Some(i) if w.colouring.get(i) == w.certificate.colour => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Refutations are re-checked directly; exhaustion claims by re-running
/// the complete solver.
fn verify_number_search(
    w: &NumberSearch,
    r: u8,
    budget: u64,
    system_at: impl Fn(usize) -> Result<Hypergraph>,
) -> Result<bool> {
    for (n, verdict) in &w.levels {
        let h = system_at(*n)?;
        let ok = match verdict {
            LevelVerdict::Fails { domain, colouring } => {
                *domain == h.vertices && colouring.r == r && colouring.is_valid(h.vertices) && escapes_all(&h, colouring)
            }
            LevelVerdict::Holds { domain, .. } => {
                *domain == h.vertices && matches!(find_bad_colouring(&h, r, budget), SolveOutcome::Exhausted { .. })
            }
            LevelVerdict::Unknown { domain, .. } => *domain == h.vertices,
        };
        if !ok {
            return Ok(false);
        }
    }
    // the bounds must follow from the levels
    let again = crate::ramsey::summarize_levels(w.levels.clone());
    Ok(again == *w)
}
