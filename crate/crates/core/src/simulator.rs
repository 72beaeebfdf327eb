//! Seeded Monte-Carlo field simulator.
//!
//! Received power on every (target, anchor) link is the deterministic
//! path-loss prediction plus i.i.d. zero-mean Gaussian shadowing in dB.
//! Repeated draws on one link are averaged in dBm before ranging.
//!
//! # Random streams
//!
//! All randomness comes from ChaCha20 ([`rand_chacha::ChaCha20Rng`]). For a
//! scenario seed `s`, replication `r`, target `t` and anchor `a`:
//!
//! 1. the key is `ChaCha20Rng::seed_from_u64(s)` (PCG32 key expansion as
//!    documented by `rand_core`);
//! 2. the stream id is `r`;
//! 3. the word position is `(t << 48) | (a << 32)`, giving every link a
//!    private window of 2^32 output words.
//!
//! Draws on one link are taken in sample order as `StandardNormal` values
//! scaled by `sigma`. A link's realisation therefore does not depend on how
//! many other targets or anchors the scenario has, so trilateration (first
//! three anchors) and multilateration (all anchors) see identical noise on
//! the shared links, and the same standard-normal draws are reused when
//! only `sigma` changes.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::lateration::{locate_from_rssi, AnchorNode, Method};
use crate::metrics::{summarize, LocalizationReport};
use crate::pathloss::PathLossModel;
use crate::{Error, Point2, Result};

/// Seed of [`default_field_scenario`].
pub const DEFAULT_SEED: u64 = 868;
/// Shadowing standard deviation of [`default_field_scenario`], dB.
pub const DEFAULT_SIGMA_DB: f64 = 3.0;
pub const DEFAULT_SAMPLES_PER_LINK: usize = 10;
/// Transmit power of [`default_field_scenario`], dBm.
pub const DEFAULT_TX_POWER_DBM: f64 = 14.0;
/// Links shorter than this (a target on top of an anchor) are simulated at
/// this separation, since the log-distance model diverges at zero.
pub const MIN_LINK_DISTANCE_M: f64 = 1e-3;
/// GER differences at or below this are ties, which multilateration loses.
pub const TIE_TOLERANCE_M: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub width_m: f64,
    pub height_m: f64,
}

impl Field {
    pub fn contains(&self, p: Point2) -> bool {
        (0.0..=self.width_m).contains(&p.x) && (0.0..=self.height_m).contains(&p.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub field: Field,
    pub anchors: Vec<AnchorNode>,
    pub targets: Vec<Point2>,
    pub model: PathLossModel,
    pub tx_power_dbm: f64,
    pub shadowing_sigma_db: f64,
    pub samples_per_link: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if !(self.field.width_m > 0.0 && self.field.height_m > 0.0) {
            return bad(format!(
                "field must have positive size, got {} x {}",
                self.field.width_m, self.field.height_m
            ));
        }
        if self.anchors.len() < 3 {
            return bad(format!("need at least 3 anchors, got {}", self.anchors.len()));
        }
        if self.targets.is_empty() {
            return bad("need at least 1 target placement".into());
        }
        if !(self.shadowing_sigma_db >= 0.0 && self.shadowing_sigma_db.is_finite()) {
            return bad(format!("shadowing sigma must be >= 0, got {}", self.shadowing_sigma_db));
        }
        if self.samples_per_link < 1 {
            return bad("samples_per_link must be >= 1".into());
        }
        if !self.tx_power_dbm.is_finite() {
            return bad("tx_power_dbm must be finite".into());
        }
        if let Some(a) = self.anchors.iter().find(|a| !self.field.contains(a.position)) {
            return bad(format!("anchor {} at {} lies outside the field", a.id, a.position));
        }
        if let Some((i, t)) = self.targets.iter().enumerate().find(|(_, t)| !self.field.contains(**t)) {
            return bad(format!("target {i} at {t} lies outside the field"));
        }
        if self.targets.len() >= 1 << 20 || self.anchors.len() >= 1 << 16 {
            return bad("too many targets or anchors for the link stream layout".into());
        }
        Ok(())
    }

    pub fn with_sigma(mut self, sigma_db: f64) -> Self {
        self.shadowing_sigma_db = sigma_db;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Evenly spaced interior grid (8 columns x 4 rows, 1 m margin) on the
/// 10 m x 10 m field, with the grid point nearest (4, 6) replaced by (4, 6)
/// and moved to the front. 32 placements.
pub fn default_targets() -> Vec<Point2> {
    let (cols, rows, margin, side) = (8, 4, 1.0, 10.0);
    let span = side - 2.0 * margin;
    let mut grid: Vec<Point2> = (0..rows)
        .flat_map(|j| {
            (0..cols).map(move |i| {
                Point2::new(
                    margin + span * i as f64 / (cols - 1) as f64,
                    margin + span * j as f64 / (rows - 1) as f64,
                )
            })
        })
        .collect();
    let first = Point2::new(4.0, 6.0);
    let nearest = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.distance(first).total_cmp(&b.1.distance(first)))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    grid.remove(nearest);
    grid.insert(0, first);
    grid
}

/// The outdoor field: four receivers at (2,6), (6,8), (6,2), (9,5) on a
/// 10 m x 10 m area, 32 target placements starting at (4,6), the
/// 868 MHz path-loss calibration, 3 dB shadowing, 10 draws per link.
pub fn default_field_scenario() -> Scenario {
    Scenario {
        field: Field {
            width_m: 10.0,
            height_m: 10.0,
        },
        anchors: vec![
            AnchorNode::new("Rx1", 2.0, 6.0),
            AnchorNode::new("Rx2", 6.0, 8.0),
            AnchorNode::new("Rx3", 6.0, 2.0),
            AnchorNode::new("Rx4", 9.0, 5.0),
        ],
        targets: default_targets(),
        model: PathLossModel::reference_outdoor(),
        tx_power_dbm: DEFAULT_TX_POWER_DBM,
        shadowing_sigma_db: DEFAULT_SIGMA_DB,
        samples_per_link: DEFAULT_SAMPLES_PER_LINK,
        seed: DEFAULT_SEED,
    }
}

/// Random stream for one link of one replication. See the module docs.
pub fn link_rng(seed: u64, replication: u64, target: usize, anchor: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng.set_word_pos(((target as u128) << 48) | ((anchor as u128) << 32));
    rng
}

/// One simulated RSSI reading.
#[derive(Debug, Clone, PartialEq)]
pub struct RssiSample {
    pub target_index: usize,
    pub anchor_index: usize,
    pub sample_index: usize,
    pub rssi_dbm: f64,
    pub true_distance_m: f64,
}

/// Draws `samples_per_link` readings for every (target, anchor) link,
/// ordered by target, then anchor, then sample.
pub fn synthesize_observations(scenario: &Scenario, replication: u64) -> Result<Vec<RssiSample>> {
    scenario.validate()?;
    let per_link = scenario.samples_per_link;
    let mut out = Vec::with_capacity(scenario.targets.len() * scenario.anchors.len() * per_link);
    for (t, target) in scenario.targets.iter().enumerate() {
        for (a, anchor) in scenario.anchors.iter().enumerate() {
            let true_distance_m = anchor.position.distance(*target);
            let mean = scenario
                .model
                .predict_rssi(scenario.tx_power_dbm, true_distance_m.max(MIN_LINK_DISTANCE_M))?;
            let mut rng = link_rng(scenario.seed, replication, t, a);
            for s in 0..per_link {
                let z: f64 = StandardNormal.sample(&mut rng);
                out.push(RssiSample {
                    target_index: t,
                    anchor_index: a,
                    sample_index: s,
                    rssi_dbm: mean + scenario.shadowing_sigma_db * z,
                    true_distance_m,
                });
            }
        }
    }
    Ok(out)
}

/// Mean RSSI in dBm per link, indexed `[target][anchor]`.
pub fn average_per_link(scenario: &Scenario, samples: &[RssiSample]) -> Vec<Vec<f64>> {
    let (nt, na) = (scenario.targets.len(), scenario.anchors.len());
    let mut sums = vec![vec![0.0; na]; nt];
    let mut counts = vec![vec![0usize; na]; nt];
    for s in samples {
        sums[s.target_index][s.anchor_index] += s.rssi_dbm;
        counts[s.target_index][s.anchor_index] += 1;
    }
    for (row, cnt) in sums.iter_mut().zip(&counts) {
        for (v, &c) in row.iter_mut().zip(cnt) {
            *v = if c > 0 { *v / c as f64 } else { f64::NAN };
        }
    }
    sums
}

fn check_method(scenario: &Scenario, method: Method) -> Result<usize> {
    let n = scenario.anchors.len();
    if method == Method::Multilateration && n < 4 {
        return Err(Error::InvalidScenario(format!(
            "multilateration needs at least 4 anchors, scenario has {n}"
        )));
    }
    Ok(method.anchor_count(n))
}

/// Locates every target from pre-averaged link RSSI with the first
/// `method.anchor_count(..)` anchors.
pub fn localize_placements(
    scenario: &Scenario,
    averaged: &[Vec<f64>],
    method: Method,
) -> Result<LocalizationReport> {
    let used = check_method(scenario, method)?;
    let anchors = &scenario.anchors[..used];
    let mut pairs = Vec::with_capacity(scenario.targets.len());
    for (index, (target, rssi)) in scenario.targets.iter().zip(averaged).enumerate() {
        let est = locate_from_rssi(anchors, &rssi[..used], &scenario.model, scenario.tx_power_dbm)
            .map_err(|e| Error::Placement {
                index,
                source: Box::new(e),
            })?;
        pairs.push((*target, est.position));
    }
    let mut report = summarize(&pairs, method)?;
    report.method = method;
    Ok(report)
}

/// One replication of one method.
pub fn run_trial(scenario: &Scenario, method: Method, replication: u64) -> Result<LocalizationReport> {
    check_method(scenario, method)?;
    let samples = synthesize_observations(scenario, replication)?;
    localize_placements(scenario, &average_per_link(scenario, &samples), method)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub replications: usize,
    pub ger_tri: Vec<f64>,
    pub ger_multi: Vec<f64>,
    /// Fraction of replications with `ger_multi < ger_tri - TIE_TOLERANCE_M`.
    pub multi_win_rate: f64,
    pub mean_ger_tri: f64,
    pub mean_ger_multi: f64,
}

/// Paired comparison: replication `r` draws one set of link realisations
/// (stream `r`) and both methods are evaluated on it.
pub fn compare_methods(scenario: &Scenario, replications: usize) -> Result<ComparisonReport> {
    if replications < 1 {
        return Err(Error::Argument("replications must be >= 1".into()));
    }
    check_method(scenario, Method::Multilateration)?;
    let mut ger_tri = Vec::with_capacity(replications);
    let mut ger_multi = Vec::with_capacity(replications);
    for r in 0..replications {
        let samples = synthesize_observations(scenario, r as u64)?;
        let averaged = average_per_link(scenario, &samples);
        ger_tri.push(localize_placements(scenario, &averaged, Method::Trilateration)?.ger_m);
        ger_multi.push(localize_placements(scenario, &averaged, Method::Multilateration)?.ger_m);
    }
    let wins = ger_tri.iter().zip(&ger_multi).filter(|(t, m)| **m < **t - TIE_TOLERANCE_M).count();
    let n = replications as f64;
    Ok(ComparisonReport {
        replications,
        mean_ger_tri: ger_tri.iter().sum::<f64>() / n,
        mean_ger_multi: ger_multi.iter().sum::<f64>() / n,
        multi_win_rate: wins as f64 / n,
        ger_tri,
        ger_multi,
    })
}
