//! Bus physical model: RC extraction, neighbor-switching classification,
//! Elmore stage delay, repeater sizing and the coupling-ratio transform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::VoltageGrid;
use crate::pvt::{effective_vdd, DeviceParams, PvtCorner};

const EPS0: f64 = 8.854_187_8128e-12;
/// Largest Miller-weighted coupling class (both neighbors switch against the victim).
pub const MAX_K: u8 = 4;
pub const N_CLASSES: usize = MAX_K as usize + 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BusGeometry {
    pub n_wires: usize,
    pub length_mm: f64,
    pub pitch_um: f64,
    pub segment_mm: f64,
    /// Signal wires between consecutive shields. Shields also bound both edges.
    pub shield_interval: usize,
    /// Repeater size relative to the unit driver; `None` means size by calibration.
    pub repeater_size: Option<f64>,
    pub clock_ghz: f64,
    pub v_nominal: f64,
}

impl Default for BusGeometry {
    fn default() -> Self {
        BusGeometry {
            n_wires: 32,
            length_mm: 6.0,
            pitch_um: 0.8,
            segment_mm: 1.5,
            shield_interval: 4,
            repeater_size: None,
            clock_ghz: 1.5,
            v_nominal: 1.2,
        }
    }
}

impl BusGeometry {
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if self.n_wires == 0 || self.n_wires > 32 {
            bad.push(format!(
                "geometry.n_wires must be in 1..=32 (got {})",
                self.n_wires
            ));
        }
        if self.shield_interval == 0 {
            bad.push("geometry.shield_interval must be >= 1".to_string());
        }
        for (name, v) in [
            ("geometry.length_mm", self.length_mm),
            ("geometry.pitch_um", self.pitch_um),
            ("geometry.segment_mm", self.segment_mm),
            ("geometry.clock_ghz", self.clock_ghz),
            ("geometry.v_nominal", self.v_nominal),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bad.push(format!("{name} must be a positive finite number (got {v})"));
            }
        }
        if self.length_mm > 0.0 && self.segment_mm > 0.0 {
            let ratio = self.length_mm / self.segment_mm;
            if (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
                bad.push(format!(
                    "geometry.length_mm / segment_mm must be a whole number of stages (got {ratio})"
                ));
            }
        }
        if let Some(size) = self.repeater_size {
            if !(size > 0.0 && size.is_finite()) {
                bad.push(format!("geometry.repeater_size must be > 0 (got {size})"));
            }
        }
        bad
    }

    pub fn stages(&self) -> usize {
        (self.length_mm / self.segment_mm).round() as usize
    }

    pub fn t_clk(&self) -> f64 {
        1e-9 / self.clock_ghz
    }

    pub fn wire_mask(&self) -> u32 {
        if self.n_wires >= 32 {
            u32::MAX
        } else {
            (1u32 << self.n_wires) - 1
        }
    }

    pub fn left_is_shield(&self, wire: usize) -> bool {
        wire % self.shield_interval == 0
    }

    pub fn right_is_shield(&self, wire: usize) -> bool {
        wire % self.shield_interval == self.shield_interval - 1 || wire + 1 == self.n_wires
    }
}

/// Process/metal parameters behind the closed-form RC estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WireTech {
    pub width_um: f64,
    pub thickness_um: f64,
    /// Dielectric height to the return plane below.
    pub ild_height_um: f64,
    pub resistivity_ohm_m: f64,
    pub eps_r: f64,
    pub ground_fringe_ff_per_mm: f64,
    pub coupling_fringe_ff_per_mm: f64,
    /// Linear temperature coefficient of wire resistance (1/C).
    pub r_temp_coeff: f64,
}

impl Default for WireTech {
    fn default() -> Self {
        WireTech {
            width_um: 0.4,
            thickness_um: 0.7,
            ild_height_um: 0.5,
            resistivity_ohm_m: 2.2e-8,
            eps_r: 3.6,
            ground_fringe_ff_per_mm: 25.0,
            coupling_fringe_ff_per_mm: 5.0,
            r_temp_coeff: 0.0039,
        }
    }
}

impl WireTech {
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for (name, v) in [
            ("wire.width_um", self.width_um),
            ("wire.thickness_um", self.thickness_um),
            ("wire.ild_height_um", self.ild_height_um),
            ("wire.resistivity_ohm_m", self.resistivity_ohm_m),
            ("wire.eps_r", self.eps_r),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bad.push(format!("{name} must be a positive finite number (got {v})"));
            }
        }
        if self.ground_fringe_ff_per_mm < 0.0 || self.coupling_fringe_ff_per_mm < 0.0 {
            bad.push("wire fringe capacitances must be >= 0".to_string());
        }
        if self.r_temp_coeff < 0.0 {
            bad.push("wire.r_temp_coeff must be >= 0".to_string());
        }
        bad
    }
}

/// Per-segment lumped parasitics of one signal wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentRc {
    pub r_wire: f64,
    pub c_g: f64,
    /// Coupling to one neighbor.
    pub c_c: f64,
    /// Worst-case effective load `c_g + 4 c_c`, kept as its own value so that
    /// parasitic transforms that conserve it reproduce the worst-case delay bit for bit.
    pub c_worst: f64,
}

impl SegmentRc {
    pub fn new(r_wire: f64, c_g: f64, c_c: f64) -> Result<Self> {
        if !(r_wire > 0.0 && c_g > 0.0 && c_c >= 0.0) || !(r_wire + c_g + c_c).is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "segment parasitics must be positive (r={r_wire}, cg={c_g}, cc={c_c})"
            )));
        }
        Ok(SegmentRc {
            r_wire,
            c_g,
            c_c,
            c_worst: c_g + f64::from(MAX_K) * c_c,
        })
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.c_c / self.c_g
    }

    /// Effective switched load for coupling class `k`: `c_g + k c_c`.
    pub fn load(&self, k: u8) -> f64 {
        debug_assert!(k <= MAX_K);
        self.c_worst - f64::from(MAX_K - k) * self.c_c
    }
}

/// Closed-form parallel-plate plus lateral-coupling estimate for one segment.
pub fn extract_rc(geometry: &BusGeometry, tech: &WireTech) -> Result<SegmentRc> {
    let spacing_um = geometry.pitch_um - tech.width_um;
    if !(tech.width_um > 0.0) || !(spacing_um > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "wire width {} um and spacing {} um must both be positive",
            tech.width_um, spacing_um
        )));
    }
    if !(tech.thickness_um > 0.0 && tech.ild_height_um > 0.0 && geometry.segment_mm > 0.0) {
        return Err(Error::InvalidGeometry(
            "thickness, dielectric height and segment length must be positive".to_string(),
        ));
    }
    let len_m = geometry.segment_mm * 1e-3;
    let eps = EPS0 * tech.eps_r;
    // fF/mm == 1e-12 F/m
    let cg_per_m = eps * tech.width_um / tech.ild_height_um + tech.ground_fringe_ff_per_mm * 1e-12;
    let cc_per_m = eps * tech.thickness_um / spacing_um + tech.coupling_fringe_ff_per_mm * 1e-12;
    let r_wire = tech.resistivity_ohm_m * len_m / (tech.width_um * 1e-6 * tech.thickness_um * 1e-6);
    SegmentRc::new(r_wire, cg_per_m * len_m, cc_per_m * len_m)
}

/// Switching context of one signal wire in one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingClass {
    /// Sum of the two per-side Miller factors (each 0, 1 or 2).
    pub k: u8,
    pub toggled: bool,
}

fn side_factor(victim_rises: bool, neighbor: Option<(bool, bool)>) -> u8 {
    match neighbor {
        // (toggled, rises)
        Some((true, rises)) if rises == victim_rises => 0,
        Some((true, _)) => 2,
        _ => 1,
    }
}

/// Per-wire coupling classes for the transition `prev -> next`. Bit `i` is
/// wire `i`; shields (every `shield_interval` wires and at both edges) never
/// switch, so they always contribute a factor of 1.
pub fn classify_transition(prev: u32, next: u32, geometry: &BusGeometry) -> Vec<CouplingClass> {
    let n = geometry.n_wires;
    let bit = |w: u32, i: usize| (w >> i) & 1 == 1;
    let state = |i: usize| {
        let toggled = bit(prev, i) != bit(next, i);
        (toggled, bit(next, i))
    };
    (0..n)
        .map(|i| {
            let (toggled, rises) = state(i);
            if !toggled {
                return CouplingClass {
                    k: 0,
                    toggled: false,
                };
            }
            let left = (!geometry.left_is_shield(i)).then(|| state(i - 1));
            let right = (!geometry.right_is_shield(i)).then(|| state(i + 1));
            CouplingClass {
                k: side_factor(rises, left) + side_factor(rises, right),
                toggled: true,
            }
        })
        .collect()
}

/// Per-cycle summary used by the simulator's hot loop: the worst class among
/// toggling wires and how many wires toggled in each class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransitionActivity {
    pub max_k: Option<u8>,
    pub counts: [u8; N_CLASSES],
}

impl TransitionActivity {
    pub fn toggles(&self) -> u32 {
        self.counts.iter().map(|&c| u32::from(c)).sum()
    }

    pub fn from_classes(classes: &[CouplingClass]) -> Self {
        let mut act = TransitionActivity::default();
        for c in classes.iter().filter(|c| c.toggled) {
            act.counts[c.k as usize] += 1;
            act.max_k = Some(act.max_k.map_or(c.k, |m| m.max(c.k)));
        }
        act
    }
}

/// Bit-mask form of the shield layout for fast classification.
#[derive(Debug, Clone, Copy)]
pub struct BusLayout {
    wire_mask: u32,
    /// Wires whose lower-index neighbor is a shield.
    left_shield: u32,
    /// Wires whose higher-index neighbor is a shield.
    right_shield: u32,
}

impl BusLayout {
    pub fn new(geometry: &BusGeometry) -> Self {
        let mut left_shield = 0u32;
        let mut right_shield = 0u32;
        for i in 0..geometry.n_wires {
            if geometry.left_is_shield(i) {
                left_shield |= 1 << i;
            }
            if geometry.right_is_shield(i) {
                right_shield |= 1 << i;
            }
        }
        BusLayout {
            wire_mask: geometry.wire_mask(),
            left_shield,
            right_shield,
        }
    }

    pub fn wire_mask(&self) -> u32 {
        self.wire_mask
    }

    pub fn activity(&self, prev: u32, next: u32) -> TransitionActivity {
        let toggled = (prev ^ next) & self.wire_mask;
        let mut act = TransitionActivity::default();
        if toggled == 0 {
            return act;
        }
        let rising = toggled & next;
        let falling = toggled & !next;
        // Neighbor state as seen from each wire, with shields forced quiet.
        let l_rise = (rising << 1) & !self.left_shield;
        let l_fall = (falling << 1) & !self.left_shield;
        let r_rise = (rising >> 1) & !self.right_shield;
        let r_fall = (falling >> 1) & !self.right_shield;
        let (same_l, opp_l) = (
            (rising & l_rise) | (falling & l_fall),
            (rising & l_fall) | (falling & l_rise),
        );
        let (same_r, opp_r) = (
            (rising & r_rise) | (falling & r_fall),
            (rising & r_fall) | (falling & r_rise),
        );
        let mut rest = toggled;
        let mut max_k = 0u8;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            let m = 1u32 << i;
            let side = |same: u32, opp: u32| -> u8 {
                if same & m != 0 {
                    0
                } else if opp & m != 0 {
                    2
                } else {
                    1
                }
            };
            let k = side(same_l, opp_l) + side(same_r, opp_r);
            act.counts[k as usize] += 1;
            max_k = max_k.max(k);
        }
        act.max_k = Some(max_k);
        act
    }
}

/// Everything needed to evaluate wire delay at an operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusModel {
    pub geometry: BusGeometry,
    pub tech: WireTech,
    pub device: DeviceParams,
    pub rc: SegmentRc,
    pub repeater_size: f64,
}

impl BusModel {
    /// Driver plus half the (temperature-scaled) wire resistance.
    pub fn total_resistance(&self, v_supply: f64, corner: PvtCorner) -> Result<f64> {
        let v_eff = effective_vdd(v_supply, corner);
        let r_drv = self
            .device
            .driver_resistance(self.repeater_size, v_eff, corner)?;
        let r_wire =
            self.rc.r_wire * (1.0 + self.tech.r_temp_coeff * (corner.temperature_c - 25.0));
        Ok(r_drv + 0.5 * r_wire)
    }

    /// Elmore delay of one repeater stage for a toggling wire of class `k`.
    pub fn stage_delay(&self, k: u8, v_supply: f64, corner: PvtCorner) -> Result<f64> {
        Ok(self.total_resistance(v_supply, corner)? * self.rc.load(k))
    }

    /// Input-to-output delay; every stage sees the same neighbor pattern.
    pub fn path_delay(&self, k: u8, v_supply: f64, corner: PvtCorner) -> Result<f64> {
        Ok(self.geometry.stages() as f64 * self.stage_delay(k, v_supply, corner)?)
    }

    pub fn worst_case_delay(&self) -> Result<f64> {
        self.path_delay(MAX_K, self.geometry.v_nominal, PvtCorner::worst())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub repeater_size: f64,
    /// Worst-corner, worst-pattern path delay at nominal supply (s).
    pub worst_delay: f64,
}

const SIZE_SEARCH_MIN: f64 = 1e-3;
const SIZE_SEARCH_MAX: f64 = 1e6;

/// Smallest repeater size meeting `budget` seconds for the worst pattern at
/// the slow/100 C/10% IR corner and nominal supply. Bisection in log-size,
/// stopped at 1e-6 relative resolution.
pub fn calibrate_repeaters(
    geometry: &BusGeometry,
    tech: &WireTech,
    device: &DeviceParams,
    rc: SegmentRc,
    budget: f64,
) -> Result<Calibration> {
    let delay_at = |size: f64| {
        BusModel {
            geometry: geometry.clone(),
            tech: tech.clone(),
            device: device.clone(),
            rc,
            repeater_size: size,
        }
        .worst_case_delay()
    };
    let (mut lo, mut hi) = (SIZE_SEARCH_MIN, SIZE_SEARCH_MAX);
    let best = delay_at(hi)?;
    if best > budget {
        return Err(Error::CalibrationFailed(format!(
            "even size {hi:e} gives {:.1} ps > {:.1} ps budget",
            best * 1e12,
            budget * 1e12
        )));
    }
    if delay_at(lo)? <= budget {
        return Err(Error::CalibrationFailed(format!(
            "size {lo:e} already meets the budget; widen the search range"
        )));
    }
    while hi / lo - 1.0 > 1e-6 {
        let mid = (lo * hi).sqrt();
        if delay_at(mid)? <= budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Calibration {
        repeater_size: hi,
        worst_delay: delay_at(hi)?,
    })
}

/// Scales the coupling-to-ground ratio by `ratio_multiplier` while holding the
/// wire resistance and the worst-case load `c_g + 4 c_c` fixed.
pub fn transform_geometry(rc: SegmentRc, ratio_multiplier: f64) -> Result<SegmentRc> {
    if !(ratio_multiplier > 0.0 && ratio_multiplier.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "ratio multiplier must be positive and finite (got {ratio_multiplier})"
        )));
    }
    let ratio = ratio_multiplier * rc.coupling_ratio();
    let c_g = rc.c_worst / (1.0 + f64::from(MAX_K) * ratio);
    let c_c = ratio * c_g;
    if !(c_g > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "transformed ground capacitance {c_g} is not positive"
        )));
    }
    Ok(SegmentRc {
        r_wire: rc.r_wire,
        c_g,
        c_c,
        c_worst: rc.c_worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoldViolation {
    pub corner: PvtCorner,
    pub vdd: f64,
    pub k: u8,
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoldReport {
    pub passed: bool,
    pub min_delay: f64,
    pub required: f64,
    pub min_at: Option<(PvtCorner, f64)>,
    pub violations: Vec<HoldViolation>,
}

/// Short-path check for the shadow latch: the fastest toggling path (both
/// neighbors switching along with the victim) must still arrive after the
/// shadow clock edge plus hold margin, at every corner and grid voltage.
pub fn check_hold(
    model: &BusModel,
    corners: &[PvtCorner],
    grid: &VoltageGrid,
    shadow_skew: f64,
    hold_margin: f64,
) -> Result<HoldReport> {
    let required = shadow_skew + hold_margin;
    let mut min_delay = f64::INFINITY;
    let mut min_at = None;
    let mut violations = Vec::new();
    for &corner in corners {
        for idx in 0..grid.len() {
            let vdd = grid.volts(idx);
            let delay = model.path_delay(0, vdd, corner)?;
            if delay < min_delay {
                min_delay = delay;
                min_at = Some((corner, vdd));
            }
            if delay < required {
                violations.push(HoldViolation {
                    corner,
                    vdd,
                    k: 0,
                    delay,
                });
            }
        }
    }
    Ok(HoldReport {
        passed: violations.is_empty(),
        min_delay,
        required,
        min_at,
        violations,
    })
}
