use serde::{Deserialize, Serialize};

/// Size caps shared by the exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest fan accepted by enumeration routines.
    pub max_fan_vertices: usize,
    /// Largest ground set whose powerset is materialized.
    pub powerset_cap: usize,
    /// Step budget for backtracking searches.
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_fan_vertices: 24,
            powerset_cap: 16,
            budget: 50_000_000,
        }
    }
}

impl Limits {
    pub fn check_powerset(&self, what: &str, size: usize) -> crate::Result<()> {
        if size > self.powerset_cap {
            return Err(crate::Error::CapExceeded {
                what: what.to_string(),
                size,
                cap: self.powerset_cap,
            });
        }
        Ok(())
    }

    pub fn check_fan(&self, fan: &crate::Fan) -> crate::Result<()> {
        if fan.vertex_count() > self.max_fan_vertices {
            return Err(crate::Error::CapExceeded {
                what: format!("{fan}"),
                size: fan.vertex_count(),
                cap: self.max_fan_vertices,
            });
        }
        Ok(())
    }
}
