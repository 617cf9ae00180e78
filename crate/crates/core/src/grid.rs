use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supply voltages the tables are characterized at, stored in integer
/// millivolts from the ceiling down to the floor in fixed steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoltageGrid {
    pub ceiling_mv: u32,
    pub floor_mv: u32,
    pub step_mv: u32,
}

impl VoltageGrid {
    pub fn new(ceiling_mv: u32, floor_mv: u32, step_mv: u32) -> Result<Self> {
        if step_mv == 0 || floor_mv > ceiling_mv || (ceiling_mv - floor_mv) % step_mv != 0 {
            return Err(Error::InvalidParameter(format!(
                "grid {floor_mv}..={ceiling_mv} mV is not a whole number of {step_mv} mV steps"
            )));
        }
        Ok(VoltageGrid {
            ceiling_mv,
            floor_mv,
            step_mv,
        })
    }

    pub fn len(&self) -> usize {
        ((self.ceiling_mv - self.floor_mv) / self.step_mv) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index 0 is the ceiling.
    pub fn mv(&self, idx: usize) -> u32 {
        self.ceiling_mv - self.step_mv * idx as u32
    }

    pub fn volts(&self, idx: usize) -> f64 {
        mv_to_volts(self.mv(idx))
    }

    pub fn iter_mv(&self) -> impl DoubleEndedIterator<Item = u32> + '_ {
        (0..self.len()).map(move |i| self.mv(i))
    }

    pub fn index_of_mv(&self, mv: u32) -> Result<usize> {
        if mv > self.ceiling_mv || mv < self.floor_mv {
            return Err(Error::OutOfTableRange {
                volts: mv_to_volts(mv),
                floor: mv_to_volts(self.floor_mv),
                ceiling: mv_to_volts(self.ceiling_mv),
            });
        }
        let off = self.ceiling_mv - mv;
        if off % self.step_mv != 0 {
            return Err(Error::OffGrid {
                volts: mv_to_volts(mv),
                step_mv: self.step_mv,
            });
        }
        Ok((off / self.step_mv) as usize)
    }

    pub fn index_of(&self, volts: f64) -> Result<usize> {
        let mv = volts_to_mv(volts).ok_or(Error::OffGrid {
            volts,
            step_mv: self.step_mv,
        })?;
        self.index_of_mv(mv).map_err(|e| match e {
            Error::OffGrid { step_mv, .. } => Error::OffGrid { volts, step_mv },
            other => other,
        })
    }

    pub fn contains_mv(&self, mv: u32) -> bool {
        self.index_of_mv(mv).is_ok()
    }
}

pub fn mv_to_volts(mv: u32) -> f64 {
    mv as f64 / 1000.0
}

/// Exact conversion when `volts` is within 1 nV of a whole millivolt.
pub fn volts_to_mv(volts: f64) -> Option<u32> {
    let scaled = volts * 1000.0;
    let rounded = scaled.round();
    if rounded < 0.0 || (scaled - rounded).abs() > 1e-6 {
        None
    } else {
        Some(rounded as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = VoltageGrid::new(1200, 600, 20).unwrap();
        assert_eq!(g.len(), 31);
        assert_eq!(g.mv(0), 1200);
        assert_eq!(g.mv(30), 600);
        let mvs: Vec<u32> = g.iter_mv().collect();
        assert!(mvs.windows(2).all(|w| w[0] - w[1] == 20));
    }

    #[test]
    fn lookup_index() {
        let g = VoltageGrid::new(1200, 600, 20).unwrap();
        assert_eq!(g.index_of(1.2).unwrap(), 0);
        assert_eq!(g.index_of(0.98).unwrap(), 11);
        assert!(matches!(g.index_of(0.99), Err(Error::OffGrid { .. })));
        assert!(matches!(g.index_of(0.9805), Err(Error::OffGrid { .. })));
        assert!(matches!(
            g.index_of(0.58),
            Err(Error::OutOfTableRange { .. })
        ));
        assert!(matches!(
            g.index_of(1.22),
            Err(Error::OutOfTableRange { .. })
        ));
    }

    #[test]
    fn rejects_ragged_grid() {
        assert!(VoltageGrid::new(1200, 610, 20).is_err());
        assert!(VoltageGrid::new(1200, 600, 0).is_err());
    }
}
