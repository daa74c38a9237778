//! Seeded synthetic morphing world.
//!
//! Identities are uniform points on the unit hypersphere, probes are noisy
//! renormalized copies of them, and each FRS is a cosine matcher behind its
//! own random orthonormal projection. Morphs are built with
//! [`interpolate`](crate::interp::interpolate) either directly on identity
//! embeddings or on their images under an [`EncoderSurrogate`], and scored
//! against both subjects' probes in the same space.
//!
//! Everything is a pure function of the [`SimConfig`]; randomness is drawn
//! from keyed [`rng::Stream`]s.

pub mod encoder;
pub mod frs;
pub mod rng;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::calibration::{calibrate, Calibration, CalibrationError};
use crate::interp::{interpolate, EmbeddingVector, InterpError, InterpKind, MorphingFactor};
use crate::metric::{map_avg, map_matrix, FrsQuantifier, MapMatrix, MetricError};
use crate::score_model::{
    CalibrationRecord, Label, ProbePolicy, ScoreDataset, ScoreError, ScoreRecord, SubjectRole,
};

pub use encoder::{EncoderSurrogate, Nonlinearity};
pub use frs::{frs_score, FrsModel};

use frs::projected_cosine;
use rng::Stream;

type Embedding = EmbeddingVector<f64>;

/// Seed of the published reference world.
pub const REFERENCE_SEED: u64 = 20_260_316;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error("projected vector is zero")]
    ZeroProjection,
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Where the two identities are blended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InterpSpace {
    IdentityLevel,
    LatentLevel,
}

impl InterpSpace {
    pub const ALL: [InterpSpace; 2] = [InterpSpace::IdentityLevel, InterpSpace::LatentLevel];

    pub fn as_str(self) -> &'static str {
        match self {
            InterpSpace::IdentityLevel => "id",
            InterpSpace::LatentLevel => "latent",
        }
    }
}

impl fmt::Display for InterpSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InterpSpace {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "id" | "identity" => Ok(InterpSpace::IdentityLevel),
            "latent" => Ok(InterpSpace::LatentLevel),
            other => Err(format!("unknown interpolation space `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurrogateKind {
    #[default]
    Seeded,
    /// `S(x) = x`; collapses latent-level onto identity-level.
    Identity,
}

/// What is enrolled in place of the document photo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MorphSource {
    #[default]
    Interpolated,
    /// A third identity unrelated to both subjects: the no-attack baseline.
    UnrelatedIdentity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub dim: usize,
    pub n_identities: usize,
    pub probes_per_identity: usize,
    /// Per-component standard deviation of probe noise before renormalizing.
    pub probe_noise_sigma: f64,
    pub n_frs: usize,
    pub frs_proj_dim: usize,
    pub alpha: f64,
    pub interp_kind: InterpKind,
    pub interp_space: InterpSpace,
    pub n_pairs: usize,
    pub target_far: f64,
    pub surrogate: SurrogateKind,
    pub morph_source: MorphSource,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::reference()
    }
}

impl SimConfig {
    /// The published reference world.
    pub fn reference() -> Self {
        Self {
            seed: REFERENCE_SEED,
            dim: 512,
            n_identities: 60,
            probes_per_identity: 10,
            probe_noise_sigma: 0.08,
            n_frs: 3,
            frs_proj_dim: 128,
            alpha: 0.5,
            interp_kind: InterpKind::Slerp,
            interp_space: InterpSpace::IdentityLevel,
            n_pairs: 40,
            target_far: 0.001,
            surrogate: SurrogateKind::Seeded,
            morph_source: MorphSource::Interpolated,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |m: String| Err(SimError::Config(m));
        if self.n_identities < 2 {
            return fail(format!(
                "need at least 2 identities, got {}",
                self.n_identities
            ));
        }
        if self.morph_source == MorphSource::UnrelatedIdentity && self.n_identities < 3 {
            return fail("the unrelated-identity baseline needs at least 3 identities".into());
        }
        if self.dim < 2 {
            return fail(format!("dimension {} is below 2", self.dim));
        }
        if self.probes_per_identity < 1 || self.n_frs < 1 || self.n_pairs < 1 {
            return fail("probe, FRS and pair counts must be positive".into());
        }
        if self.frs_proj_dim < 2 || self.frs_proj_dim > self.dim {
            return fail(format!(
                "FRS projection dimension {} must lie in [2, {}]",
                self.frs_proj_dim, self.dim
            ));
        }
        if !(self.probe_noise_sigma > 0.0 && self.probe_noise_sigma.is_finite()) {
            return fail(format!(
                "probe noise sigma {} must be positive",
                self.probe_noise_sigma
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return fail(format!("alpha {} is outside [0, 1]", self.alpha));
        }
        if !(self.target_far > 0.0 && self.target_far < 1.0) {
            return fail(format!("target FAR {} is outside (0, 1)", self.target_far));
        }
        let max_pairs = self.n_identities * (self.n_identities - 1) / 2;
        if self.n_pairs > max_pairs {
            return fail(format!(
                "{} pairs requested but only {max_pairs} exist among {} identities",
                self.n_pairs, self.n_identities
            ));
        }
        Ok(())
    }

    fn factor(&self) -> Result<MorphingFactor<f64>, SimError> {
        Ok(MorphingFactor::new(self.alpha)?)
    }
}

/// Unit identity embeddings, one keyed stream per identity.
pub fn gen_identities(config: &SimConfig) -> Vec<Embedding> {
    (0..config.n_identities)
        .map(|i| {
            let g = Stream::new(config.seed, "identity", i as u64).gaussians(config.dim);
            EmbeddingVector::unit(g).expect("gaussian sample is nonzero")
        })
        .collect()
}

/// Probes of identity `index`: `normalize(identity + sigma * g)`.
pub fn gen_probes(identity: &Embedding, index: usize, config: &SimConfig) -> Vec<Embedding> {
    let mut stream = Stream::new(config.seed, "probe", index as u64);
    (0..config.probes_per_identity)
        .map(|_| {
            let noisy = identity
                .as_slice()
                .iter()
                .map(|&x| x + config.probe_noise_sigma * stream.next_gaussian())
                .collect();
            EmbeddingVector::unit(noisy).expect("noisy probe is nonzero")
        })
        .collect()
}

pub fn gen_frs_models(config: &SimConfig) -> Vec<FrsModel> {
    (0..config.n_frs)
        .map(|f| FrsModel::seeded(config.seed, f, frs_id(f), config.frs_proj_dim, config.dim))
        .collect()
}

pub fn gen_encoder(config: &SimConfig) -> EncoderSurrogate {
    match config.surrogate {
        SurrogateKind::Seeded => EncoderSurrogate::seeded(config.seed, config.dim),
        SurrogateKind::Identity => EncoderSurrogate::identity(config.dim),
    }
}

fn frs_id(f: usize) -> String {
    format!("frs{}", f + 1)
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Maps a vector into the space where a world is scored.
fn represent(
    v: &Embedding,
    space: InterpSpace,
    encoder: Option<&EncoderSurrogate>,
) -> Result<Embedding, SimError> {
    match space {
        InterpSpace::IdentityLevel => Ok(v.clone()),
        InterpSpace::LatentLevel => {
            let enc =
                encoder.ok_or_else(|| SimError::Config("latent space needs an encoder".into()))?;
            Ok(EmbeddingVector::new(enc.encode(v.as_slice()))?)
        }
    }
}

/// Morph of two identity embeddings, expressed in the configured space.
pub fn make_morph(
    e_a: &Embedding,
    e_b: &Embedding,
    config: &SimConfig,
    encoder: Option<&EncoderSurrogate>,
) -> Result<Embedding, SimError> {
    let a = represent(e_a, config.interp_space, encoder)?;
    let b = represent(e_b, config.interp_space, encoder)?;
    Ok(interpolate(&a, &b, config.factor()?, config.interp_kind)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedPair {
    pub a: usize,
    pub b: usize,
    pub mean_score: f64,
}

/// Mean FRS score of identities `i` and `j`.
pub fn pair_score(frs: &[FrsModel], e_i: &Embedding, e_j: &Embedding) -> Result<f64, SimError> {
    let total = frs
        .iter()
        .map(|m| frs_score(m, e_i, e_j))
        .sum::<Result<f64, _>>()?;
    Ok(total / frs.len() as f64)
}

/// The `n_pairs` identity pairs with the highest mean FRS score, best first.
/// Ties resolve toward lower `(a, b)`.
pub fn select_pairs(
    identities: &[Embedding],
    frs: &[FrsModel],
    n_pairs: usize,
) -> Result<Vec<RankedPair>, SimError> {
    let projected: Vec<Vec<Vec<f64>>> = frs
        .iter()
        .map(|m| identities.iter().map(|e| m.project(e.as_slice())).collect())
        .collect();
    let mut all = Vec::new();
    for a in 0..identities.len() {
        for b in a + 1..identities.len() {
            let mut total = 0.0;
            for p in &projected {
                total += projected_cosine(&p[a], &p[b])?;
            }
            all.push(RankedPair {
                a,
                b,
                mean_score: total / frs.len() as f64,
            });
        }
    }
    all.sort_by(|x, y| {
        y.mean_score
            .total_cmp(&x.mean_score)
            .then((x.a, x.b).cmp(&(y.a, y.b)))
    });
    all.truncate(n_pairs);
    Ok(all)
}

/// Generated identities, probes, matchers and encoder for one seed.
#[derive(Debug, Clone)]
pub struct World {
    pub identities: Vec<Embedding>,
    pub probes: Vec<Vec<Embedding>>,
    pub frs: Vec<FrsModel>,
    pub encoder: Option<EncoderSurrogate>,
}

impl World {
    /// Builds the world; the encoder is only generated when `with_encoder`.
    pub fn generate(config: &SimConfig, with_encoder: bool) -> Result<Self, SimError> {
        config.validate()?;
        let identities = gen_identities(config);
        let probes = identities
            .iter()
            .enumerate()
            .map(|(i, e)| gen_probes(e, i, config))
            .collect();
        Ok(Self {
            identities,
            probes,
            frs: gen_frs_models(config),
            encoder: with_encoder.then(|| gen_encoder(config)),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub dataset: ScoreDataset<f64>,
    /// Ordered by FRS, then genuine before impostor, then identity and probe.
    pub calibration: Vec<CalibrationRecord<f64>>,
    pub pairs: Vec<RankedPair>,
}

pub fn run_simulation(config: &SimConfig) -> Result<Simulation, SimError> {
    let world = World::generate(config, config.interp_space == InterpSpace::LatentLevel)?;
    simulate_in(&world, config)
}

/// Runs one configuration inside an already generated world.
pub fn simulate_in(world: &World, config: &SimConfig) -> Result<Simulation, SimError> {
    config.validate()?;
    let enc = world.encoder.as_ref();
    let space = config.interp_space;
    let pairs = select_pairs(&world.identities, &world.frs, config.n_pairs)?;

    let ids: Vec<Embedding> = world
        .identities
        .iter()
        .map(|e| represent(e, space, enc))
        .collect::<Result<_, _>>()?;
    let probes: Vec<Vec<Embedding>> = world
        .probes
        .iter()
        .map(|ps| ps.iter().map(|p| represent(p, space, enc)).collect())
        .collect::<Result<_, _>>()?;

    let morphs: Vec<Embedding> = pairs
        .iter()
        .enumerate()
        .map(|(rank, pair)| match config.morph_source {
            MorphSource::Interpolated => make_morph(
                &world.identities[pair.a],
                &world.identities[pair.b],
                config,
                enc,
            ),
            MorphSource::UnrelatedIdentity => {
                let k = unrelated_identity(config, rank, pair);
                Ok(ids[k].clone())
            }
        })
        .collect::<Result<_, _>>()?;

    let id_w = width(config.n_identities);
    let probe_w = width(config.probes_per_identity);
    let mut records = Vec::new();
    let mut calibration = Vec::new();
    for model in &world.frs {
        let p_ids: Vec<Vec<f64>> = ids.iter().map(|e| model.project(e.as_slice())).collect();
        let p_probes: Vec<Vec<Vec<f64>>> = probes
            .iter()
            .map(|ps| ps.iter().map(|p| model.project(p.as_slice())).collect())
            .collect();

        for (i, pi) in p_ids.iter().enumerate() {
            for q in &p_probes[i] {
                calibration.push(CalibrationRecord::new(
                    model.frs_id.clone(),
                    Label::Genuine,
                    projected_cosine(pi, q)?,
                ));
            }
        }
        for (i, pi) in p_ids.iter().enumerate() {
            for (j, qs) in p_probes.iter().enumerate() {
                if i == j {
                    continue;
                }
                for q in qs {
                    calibration.push(CalibrationRecord::new(
                        model.frs_id.clone(),
                        Label::Impostor,
                        projected_cosine(pi, q)?,
                    ));
                }
            }
        }

        for (pair, morph) in pairs.iter().zip(&morphs) {
            let pm = model.project(morph.as_slice());
            let morph_id = format!("m{:0w$}-{:0w$}", pair.a, pair.b, w = id_w);
            for (role, subject) in [
                (SubjectRole::Accomplice, pair.a),
                (SubjectRole::Criminal, pair.b),
            ] {
                for (k, q) in p_probes[subject].iter().enumerate() {
                    records.push(ScoreRecord::new(
                        morph_id.clone(),
                        role,
                        format!("p{:0w$}", k, w = probe_w),
                        model.frs_id.clone(),
                        projected_cosine(&pm, q)?,
                    ));
                }
            }
        }
    }

    Ok(Simulation {
        dataset: ScoreDataset::from_records(records, ProbePolicy::Uniform)?,
        calibration,
        pairs,
    })
}

/// Identity used in place of pair `rank`'s morph in the baseline; never one
/// of the two subjects.
fn unrelated_identity(config: &SimConfig, rank: usize, pair: &RankedPair) -> usize {
    let mut stream = Stream::new(config.seed, "baseline", rank as u64);
    loop {
        let k = stream.next_below(config.n_identities as u64) as usize;
        if k != pair.a && k != pair.b {
            return k;
        }
    }
}

/// Calibrates on the simulated calibration records and computes the MAP
/// matrix of the simulated dataset.
pub fn evaluate(
    sim: &Simulation,
    target_far: f64,
    quantifier: FrsQuantifier,
) -> Result<(Calibration<f64>, MapMatrix<f64>), SimError> {
    let cal = calibrate(&sim.calibration, target_far)?;
    let matrix = map_matrix(&sim.dataset, &cal.table, quantifier)?;
    Ok((cal, matrix))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub space: InterpSpace,
    pub kind: InterpKind,
    pub matrix: MapMatrix<f64>,
    pub map_avg: f64,
}

/// MAP_Avg for every (interpolation space, interpolation kind) combination
/// in one shared world, in the order id/lerp, id/slerp, latent/lerp,
/// latent/slerp.
pub fn run_ablation(base: &SimConfig) -> Result<Vec<AblationRow>, SimError> {
    let world = World::generate(base, true)?;
    let mut rows = Vec::with_capacity(4);
    for space in InterpSpace::ALL {
        for kind in InterpKind::ALL {
            let config = SimConfig {
                interp_space: space,
                interp_kind: kind,
                ..base.clone()
            };
            let sim = simulate_in(&world, &config)?;
            let (_, matrix) = evaluate(&sim, base.target_far, FrsQuantifier::Joint)?;
            let avg = map_avg(&matrix).0;
            rows.push(AblationRow {
                space,
                kind,
                matrix,
                map_avg: avg,
            });
        }
    }
    Ok(rows)
}
