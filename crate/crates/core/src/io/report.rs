//! Versioned JSON analysis reports.
//!
//! Every vector is a comma-separated list of `p/q` strings. The report embeds
//! the analysed network in `.crn` form so that [`AnalysisReport::verify`] can
//! rebuild it and re-check every certificate without trusting the rest of
//! the document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::endotactic::{
    decide, sampling_oracle, AtlasConfig, AtlasError, Counterexample, Strength, Verdict,
};
use crate::equivalence::{ghost_vertices, net_vectors};
use crate::exact::{
    lp_feasible, stiemke_problem, FeasibilityCertificate, ParseRatError, Rat, RatVec,
};
use crate::network::{
    conservation_problem, deficiency, is_weakly_reversible, ReactionNetwork, StructuralReport,
};

use super::{parse_network, write_parsed, ParsedNetwork};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("network has no reactions")]
    Edgeless,
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    pub atlas: AtlasConfig,
    /// Random directions tried by the sampling oracle; zero disables it.
    pub trials: usize,
    pub seed: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            atlas: AtlasConfig::default(),
            trials: 200,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// `solution` or `separator`.
    pub kind: String,
    pub vector: String,
}

impl Certificate {
    fn from_lp(c: &FeasibilityCertificate) -> Self {
        match c {
            FeasibilityCertificate::Solution(x) => Certificate {
                kind: "solution".into(),
                vector: x.to_string(),
            },
            FeasibilityCertificate::Separator(w) => Certificate {
                kind: "separator".into(),
                vector: w.to_string(),
            },
        }
    }

    fn to_lp(&self) -> Result<FeasibilityCertificate, String> {
        let v: RatVec = self
            .vector
            .parse()
            .map_err(|e: ParseRatError| e.to_string())?;
        match self.kind.as_str() {
            "solution" => Ok(FeasibilityCertificate::Solution(v)),
            "separator" => Ok(FeasibilityCertificate::Separator(v)),
            k => Err(format!("unknown certificate kind `{k}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub vertices: Vec<String>,
    /// `[source, target]` vertex indices.
    pub reactions: Vec<[usize; 2]>,
    pub linkage_classes: Vec<Vec<usize>>,
    pub stoichiometric_basis: Vec<String>,
    pub dim_s: usize,
    pub deficiency: i64,
    pub per_class_deficiency: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certified {
    pub holds: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conservation {
    pub holds: bool,
    /// Primitive integer conservation law, when one exists.
    pub vector: Option<String>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub direction: String,
    pub reaction: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndotacticSection {
    pub holds: bool,
    pub directions_checked: usize,
    pub counterexample: Option<CounterexampleJson>,
    /// A counterexample found by random directions despite a pass.
    pub oracle_contradiction: Option<CounterexampleJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dynamics {
    /// Source vertex ↦ net vector, zero entries included.
    pub net_vectors: BTreeMap<String, String>,
    /// Ghost source vertices.
    pub ghosts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub version: u32,
    pub species: Vec<String>,
    pub network: String,
    pub structure: Structure,
    pub weakly_reversible: bool,
    /// Index of a reaction between different strong components.
    pub weak_reversibility_witness: Option<usize>,
    pub consistent: Certified,
    pub conservative: Conservation,
    pub endotactic: EndotacticSection,
    pub strongly_endotactic: EndotacticSection,
    pub oracle_seed: u64,
    pub oracle_trials: usize,
    /// Present when the input carried rates.
    pub dynamics: Option<Dynamics>,
}

fn structure(g: &ReactionNetwork, r: &StructuralReport) -> Structure {
    Structure {
        vertices: g.vertices().iter().map(RatVec::to_string).collect(),
        reactions: g.reactions().iter().map(|r| [r.source, r.target]).collect(),
        linkage_classes: r.linkage_classes.clone(),
        stoichiometric_basis: r.stoich_basis.iter().map(RatVec::to_string).collect(),
        dim_s: r.dim_s,
        deficiency: r.deficiency,
        per_class_deficiency: r.per_class_deficiency.clone(),
    }
}

fn cx_json(c: &Counterexample) -> CounterexampleJson {
    CounterexampleJson {
        direction: c.direction.to_string(),
        reaction: c.reaction,
    }
}

fn endotactic_section(
    g: &ReactionNetwork,
    strength: Strength,
    cfg: &ReportConfig,
) -> Result<EndotacticSection, AtlasError> {
    let v = decide(g, strength, &cfg.atlas)?;
    let oracle = if v.is_pass() && cfg.trials > 0 {
        sampling_oracle(g, strength, cfg.trials, cfg.seed)
    } else {
        None
    };
    Ok(EndotacticSection {
        holds: v.is_pass(),
        directions_checked: v.directions_checked,
        counterexample: v.counterexample.as_ref().map(cx_json),
        oracle_contradiction: oracle.as_ref().map(cx_json),
    })
}

fn dynamics(p: &ParsedNetwork) -> Option<Dynamics> {
    let sys = p.system()?;
    let g = sys.network();
    Some(Dynamics {
        net_vectors: net_vectors(sys)
            .entries()
            .iter()
            .map(|(y, w)| (y.to_string(), w.to_string()))
            .collect(),
        ghosts: ghost_vertices(sys)
            .vertices
            .iter()
            .map(|&i| g.vertex(i).to_string())
            .collect(),
    })
}

/// Builds the full report for a parsed document.
pub fn analyze(p: &ParsedNetwork, cfg: &ReportConfig) -> Result<AnalysisReport, ReportError> {
    let g = p.network();
    if g.num_reactions() == 0 {
        return Err(ReportError::Edgeless);
    }
    let s = deficiency(g);
    let wr = is_weakly_reversible(g);
    let consistent = lp_feasible(&stiemke_problem(&g.reaction_vectors()).expect("nonempty"))
        .expect("certified LP");
    let conservation = lp_feasible(&conservation_problem(g)).expect("certified LP");
    let law = conservation.solution().map(|v| {
        v.primitive_integer()
            .into_iter()
            .map(Rat::from_integer)
            .collect::<RatVec>()
    });
    Ok(AnalysisReport {
        version: REPORT_VERSION,
        species: g.context().names().to_vec(),
        network: write_parsed(p),
        structure: structure(g, &s),
        weakly_reversible: wr.weakly_reversible,
        weak_reversibility_witness: wr.witness,
        consistent: Certified {
            holds: consistent.is_solution(),
            certificate: Certificate::from_lp(&consistent),
        },
        conservative: Conservation {
            holds: law.is_some(),
            vector: law.as_ref().map(RatVec::to_string),
            certificate: match &law {
                Some(v) => Certificate {
                    kind: "solution".into(),
                    vector: v.to_string(),
                },
                None => Certificate::from_lp(&conservation),
            },
        },
        endotactic: endotactic_section(g, Strength::Endotactic, cfg)?,
        strongly_endotactic: endotactic_section(g, Strength::StronglyEndotactic, cfg)?,
        oracle_seed: cfg.seed,
        oracle_trials: cfg.trials,
        dynamics: dynamics(p),
    })
}

impl AnalysisReport {
    /// Pretty JSON with keys in lexicographic order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Rebuilds the embedded network and re-checks every field against it.
    /// Certificates are checked directly; verdicts without a certificate are
    /// recomputed with `atlas`.
    pub fn verify(&self, atlas: &AtlasConfig) -> Result<(), String> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(format!("{what} does not re-verify"))
            }
        };
        check(self.version == REPORT_VERSION, "version")?;
        let p = parse_network(&self.network).map_err(|e| format!("embedded network: {e}"))?;
        let g = p.network();
        check(g.context().names() == self.species.as_slice(), "species")?;
        check(structure(g, &deficiency(g)) == self.structure, "structure")?;
        let wr = is_weakly_reversible(g);
        check(
            wr.weakly_reversible == self.weakly_reversible,
            "weak reversibility",
        )?;
        if let Some(e) = self.weak_reversibility_witness {
            let comp = crate::network::strong_components(g);
            let r = g.reactions().get(e).ok_or("witness out of range")?;
            check(
                comp[r.source] != comp[r.target],
                "weak reversibility witness",
            )?;
        }

        let cons = self.consistent.certificate.to_lp()?;
        check(
            cons.is_solution() == self.consistent.holds,
            "consistency verdict",
        )?;
        check(
            cons.verify(&stiemke_problem(&g.reaction_vectors()).map_err(|e| e.to_string())?),
            "consistency certificate",
        )?;

        let law = self.conservative.certificate.to_lp()?;
        check(
            law.is_solution() == self.conservative.holds,
            "conservation verdict",
        )?;
        check(
            law.verify(&conservation_problem(g)),
            "conservation certificate",
        )?;
        if let Some(v) = &self.conservative.vector {
            check(
                Some(v) == law.solution().map(RatVec::to_string).as_ref(),
                "conservation vector",
            )?;
        }

        for (section, strength) in [
            (&self.endotactic, Strength::Endotactic),
            (&self.strongly_endotactic, Strength::StronglyEndotactic),
        ] {
            let name = match strength {
                Strength::Endotactic => "endotactic verdict",
                Strength::StronglyEndotactic => "strongly endotactic verdict",
            };
            match &section.counterexample {
                Some(c) => {
                    check(!section.holds, name)?;
                    let direction: RatVec = c
                        .direction
                        .parse()
                        .map_err(|e: ParseRatError| e.to_string())?;
                    check(c.reaction < g.num_reactions(), name)?;
                    check(
                        Counterexample {
                            direction,
                            reaction: c.reaction,
                        }
                        .verify(g, strength),
                        name,
                    )?;
                }
                None => {
                    let v = decide(g, strength, atlas).map_err(|e| e.to_string())?;
                    check(section.holds && v.verdict == Verdict::Pass, name)?;
                    check(v.directions_checked == section.directions_checked, name)?;
                }
            }
        }
        check(dynamics(&p) == self.dynamics, "net vectors")
    }
}
