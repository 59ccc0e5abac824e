//! Seeded random scenario generation.
//!
//! Draws come from xoshiro256** seeded through SplitMix64 (the reference
//! `seed_from_u64` construction), so a seed reproduces the same scenario on
//! any platform and in any language that implements the same two generators.
//! A raw 64-bit output `x` becomes a unit sample `u = (x >> 11) * 2^-53` in
//! `[0, 1)`, and a field drawn from `[low, high]` is `low + u * (high - low)`
//! (clamped to `high`), or `low * (high / low)^u` on the log scale.
//!
//! Stream order is fixed: cells in ascending order; within a cell first
//! `nec_capacity` then `fronthaul_capacity`; then UEs in ascending order, each
//! drawing `data_size`, `compute_demand`, `wireless_rate`, `fronthaul_rate`,
//! `nec_cpu_grant`, `fec_cpu_grant` in that order.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::model::{CellSpec, Metadata, Scenario, TaskSpec, Ue, UeLink};

/// Closed interval a field is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub low: f64,
    pub high: f64,
}

impl Range {
    pub const fn new(low: f64, high: f64) -> Self {
        Self { low, high }
    }

    pub const fn point(value: f64) -> Self {
        Self {
            low: value,
            high: value,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.low <= value && value <= self.high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenRanges {
    pub data_size: Range,
    pub compute_demand: Range,
    pub wireless_rate: Range,
    pub fronthaul_rate: Range,
    pub nec_cpu_grant: Range,
    pub fec_cpu_grant: Range,
    pub nec_capacity: Range,
    pub fronthaul_capacity: Range,
}

impl GenRanges {
    /// Every range with its field name, in draw-declaration order.
    pub fn named(&self) -> [(&'static str, Range); 8] {
        [
            ("data_size", self.data_size),
            ("compute_demand", self.compute_demand),
            ("wireless_rate", self.wireless_rate),
            ("fronthaul_rate", self.fronthaul_rate),
            ("nec_cpu_grant", self.nec_cpu_grant),
            ("fec_cpu_grant", self.fec_cpu_grant),
            ("nec_capacity", self.nec_capacity),
            ("fronthaul_capacity", self.fronthaul_capacity),
        ]
    }

    /// Every range set to the same point value.
    pub fn uniform_point(value: f64) -> Self {
        let r = Range::point(value);
        Self {
            data_size: r,
            compute_demand: r,
            wireless_rate: r,
            fronthaul_rate: r,
            nec_cpu_grant: r,
            fec_cpu_grant: r,
            nec_capacity: r,
            fronthaul_capacity: r,
        }
    }
}

/// Everything needed to draw a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    /// Name recorded in the scenario's metadata.
    pub preset: String,
    pub cell_count: usize,
    pub ues_per_cell: usize,
    /// Deadline shared by every task, seconds.
    pub deadline: f64,
    pub ranges: GenRanges,
    /// FEC compute capacity, cycles/s.
    pub fec_capacity: f64,
    pub seed: u64,
    /// Draw on a log scale instead of a linear one.
    #[serde(default)]
    pub log_uniform: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

// Simulation parameter table of the reference setup. Edit here only.
const PAPER_CELLS: usize = 5;
const PAPER_DEADLINE_S: f64 = 3.0;
const PAPER_RANGES: GenRanges = GenRanges {
    data_size: Range::new(1e6, 1e9),
    compute_demand: Range::new(1e6, 1e9),
    wireless_rate: Range::new(1e9, 1e10),
    fronthaul_rate: Range::new(1e9, 1e10),
    nec_cpu_grant: Range::new(1e9, 1e10),
    fec_cpu_grant: Range::new(1e11, 1e12),
    nec_capacity: Range::new(1e11, 1e12),
    fronthaul_capacity: Range::new(1e12, 1e13),
};
/// 10^5 G cycles/s.
const PAPER_FEC_CAPACITY: f64 = 1e14;

/// Access points observed per second while walking.
pub const AP_OBSERVATIONS_PER_S: f64 = 25.0;
/// Smallest per-observation record (MAC, RSS, frequency, timestamp), bytes.
pub const OBSERVATION_RECORD_BYTES: f64 = 8.0;
/// Fingerprint stream rate generated by one UE, bytes/s.
pub const FINGERPRINT_STREAM_BYTES_PER_S: f64 = 200.0;
/// Length of the observation window, seconds.
pub const OBSERVATION_WINDOW_S: f64 = 25.0;
/// Deadline for online fingerprint matching. A modelling choice, not a
/// measured value.
pub const POSITIONING_DEADLINE_S: f64 = 1.0;
/// Upper end of the positioning data-size range, as a multiple of the
/// nominal single-UE stream, to cover aggregated streams.
pub const POSITIONING_AGGREGATION_FACTOR: f64 = 100.0;

/// Bits in one observation record (64).
pub fn observation_record_bits() -> f64 {
    OBSERVATION_RECORD_BYTES * 8.0
}

/// Bits produced by one UE over the observation window (4e4).
pub fn nominal_stream_bits() -> f64 {
    OBSERVATION_WINDOW_S * FINGERPRINT_STREAM_BYTES_PER_S * 8.0
}

/// Five cells, 3 s deadlines and the reference parameter ranges.
/// `ues_per_cell` defaults to 10 and is meant to be set by the caller.
pub fn paper_preset() -> GenParams {
    GenParams {
        preset: "paper".to_string(),
        cell_count: PAPER_CELLS,
        ues_per_cell: 10,
        deadline: PAPER_DEADLINE_S,
        ranges: PAPER_RANGES,
        fec_capacity: PAPER_FEC_CAPACITY,
        seed: 0,
        log_uniform: false,
        note: None,
    }
}

/// Indoor-positioning workload: the `paper` preset with fingerprint-stream
/// data sizes and a 1 s deadline for online matching.
pub fn positioning_preset() -> GenParams {
    let nominal = nominal_stream_bits();
    let mut params = paper_preset();
    params.preset = "positioning".to_string();
    params.ranges.data_size = Range::new(nominal, nominal * POSITIONING_AGGREGATION_FACTOR);
    params.deadline = POSITIONING_DEADLINE_S;
    params.note = Some("deadline of 1 s is a modelling choice, not a measured value".to_string());
    params
}

pub fn preset(name: &str) -> Option<GenParams> {
    match name {
        "paper" => Some(paper_preset()),
        "positioning" => Some(positioning_preset()),
        _ => None,
    }
}

impl GenParams {
    pub fn with_ues_per_cell(mut self, n: usize) -> Self {
        self.ues_per_cell = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::InvalidParams(msg));
        if self.cell_count == 0 {
            return bad("cell_count must be at least 1".into());
        }
        if self.ues_per_cell == 0 {
            return bad("ues_per_cell must be at least 1".into());
        }
        if !(self.deadline.is_finite() && self.deadline > 0.0) {
            return bad(format!("deadline must be positive, got {}", self.deadline));
        }
        if !(self.fec_capacity.is_finite() && self.fec_capacity >= 0.0) {
            return bad(format!(
                "fec_capacity must be >= 0, got {}",
                self.fec_capacity
            ));
        }
        for (name, r) in self.ranges.named() {
            if !(r.low.is_finite() && r.high.is_finite()) {
                return bad(format!("{name} range must be finite"));
            }
            if r.low <= 0.0 {
                return bad(format!("{name} low must be positive, got {}", r.low));
            }
            if r.low > r.high {
                return bad(format!("{name} low {} exceeds high {}", r.low, r.high));
            }
        }
        Ok(())
    }
}

/// Portable sampler over the seeded stream.
pub struct Sampler {
    rng: Xoshiro256StarStar,
    log_uniform: bool,
}

impl Sampler {
    pub fn new(seed: u64, log_uniform: bool) -> Self {
        Self {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
            log_uniform,
        }
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn draw(&mut self, range: Range) -> f64 {
        let u = self.unit();
        if range.low == range.high {
            return range.low;
        }
        let x = if self.log_uniform {
            range.low * (range.high / range.low).powf(u)
        } else {
            range.low + u * (range.high - range.low)
        };
        x.clamp(range.low, range.high)
    }
}

/// Draws a scenario. A pure function of `params`.
pub fn generate(params: &GenParams) -> Result<Scenario, GenError> {
    params.validate()?;
    let r = &params.ranges;
    let mut sampler = Sampler::new(params.seed, params.log_uniform);

    let cells = (0..params.cell_count)
        .map(|cell_id| {
            let nec_capacity = sampler.draw(r.nec_capacity);
            let fronthaul_capacity = sampler.draw(r.fronthaul_capacity);
            let ues = (0..params.ues_per_cell)
                .map(|ue_index| {
                    let data_size = sampler.draw(r.data_size);
                    let compute_demand = sampler.draw(r.compute_demand);
                    let wireless_rate = sampler.draw(r.wireless_rate);
                    let fronthaul_rate = sampler.draw(r.fronthaul_rate);
                    let nec_cpu_grant = sampler.draw(r.nec_cpu_grant);
                    let fec_cpu_grant = sampler.draw(r.fec_cpu_grant);
                    Ue {
                        ue_index,
                        task: TaskSpec {
                            compute_demand,
                            data_size,
                            deadline: params.deadline,
                        },
                        link: UeLink {
                            wireless_rate,
                            fronthaul_rate,
                            nec_cpu_grant,
                            fec_cpu_grant,
                        },
                    }
                })
                .collect();
            CellSpec {
                cell_id,
                nec_capacity,
                fronthaul_capacity,
                ues,
            }
        })
        .collect();

    Ok(Scenario {
        cells,
        fec_capacity: params.fec_capacity,
        metadata: Metadata {
            seed: Some(params.seed),
            preset: params.preset.clone(),
            note: params.note.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent SplitMix64 + xoshiro256** from the published reference code.
    fn reference_stream(seed: u64, n: usize) -> Vec<u64> {
        let mut sm = seed;
        let mut splitmix = || {
            sm = sm.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        let mut s = [splitmix(), splitmix(), splitmix(), splitmix()];
        (0..n)
            .map(|_| {
                let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
                let t = s[1] << 17;
                s[2] ^= s[0];
                s[3] ^= s[1];
                s[1] ^= s[2];
                s[0] ^= s[3];
                s[2] ^= t;
                s[3] = s[3].rotate_left(45);
                result
            })
            .collect()
    }

    #[test]
    fn prng_matches_reference_algorithm() {
        for seed in [0, 1, 42, u64::MAX] {
            let expected = reference_stream(seed, 16);
            let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
            let got: Vec<u64> = (0..16).map(|_| rng.next_u64()).collect();
            assert_eq!(got, expected, "seed {seed}");
        }
    }

    #[test]
    fn paper_preset_values() {
        let p = paper_preset();
        assert_eq!(p.cell_count, 5);
        assert_eq!(p.deadline, 3.0);
        assert_eq!(p.fec_capacity, 1e14);
        assert_eq!(p.ranges.fec_cpu_grant, Range::new(1e11, 1e12));
        assert_eq!(p.ranges.fronthaul_capacity, Range::new(1e12, 1e13));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn positioning_preset_values() {
        let p = positioning_preset();
        assert_eq!(nominal_stream_bits(), 4e4);
        assert_eq!(observation_record_bits(), 64.0);
        assert_eq!(
            AP_OBSERVATIONS_PER_S * OBSERVATION_RECORD_BYTES,
            FINGERPRINT_STREAM_BYTES_PER_S
        );
        assert_eq!(p.ranges.data_size, Range::new(4e4, 4e6));
        assert_eq!(p.deadline, 1.0);
        assert_eq!(
            p.ranges.compute_demand,
            paper_preset().ranges.compute_demand
        );
        assert!(p.validate().is_ok());
    }

    #[test]
    fn same_seed_same_scenario() {
        let p = paper_preset().with_ues_per_cell(7).with_seed(99);
        let a = serde_json::to_string(&generate(&p).unwrap()).unwrap();
        let b = serde_json::to_string(&generate(&p).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = generate(&p.clone().with_seed(100)).unwrap();
        assert_ne!(generate(&p).unwrap(), c);
    }

    #[test]
    fn degenerate_ranges_give_identical_tasks() {
        let mut p = paper_preset().with_ues_per_cell(3);
        p.ranges = GenRanges::uniform_point(1e9);
        let s = generate(&p).unwrap();
        for t in s.tasks() {
            assert_eq!(t.task().compute_demand, 1e9);
            assert_eq!(t.task().data_size, 1e9);
            assert_eq!(t.link().wireless_rate, 1e9);
            assert_eq!(t.link().fec_cpu_grant, 1e9);
        }
        assert!(s
            .cells
            .iter()
            .all(|c| c.nec_capacity == 1e9 && c.fronthaul_capacity == 1e9));
    }

    #[test]
    fn generated_scenarios_validate() {
        for seed in 0..5 {
            let s = generate(&paper_preset().with_seed(seed)).unwrap();
            assert!(s.validate().is_empty());
            assert_eq!(s.total_task_count(), 50);
            assert_eq!(s.metadata.seed, Some(seed));
            assert_eq!(s.metadata.preset, "paper");
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = paper_preset();
        p.ranges.wireless_rate = Range::new(2.0, 1.0);
        assert!(generate(&p).is_err());
        let mut p = paper_preset();
        p.ranges.data_size.low = 0.0;
        assert!(generate(&p).is_err());
        assert!(generate(&paper_preset().with_ues_per_cell(0)).is_err());
    }

    #[test]
    fn log_uniform_stays_in_range() {
        let mut p = paper_preset().with_ues_per_cell(20);
        p.log_uniform = true;
        let s = generate(&p).unwrap();
        for t in s.tasks() {
            assert!(p.ranges.data_size.contains(t.task().data_size));
        }
    }

    #[test]
    fn unit_samples_in_half_open_interval() {
        let mut sampler = Sampler::new(7, false);
        for _ in 0..10_000 {
            let u = sampler.unit();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
