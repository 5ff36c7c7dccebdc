//! Shared run configuration, echoed into every report for reproducibility.

use serde_json::{json, Value};

pub const DEFAULT_RADIUS: u64 = 100;
pub const DEFAULT_HORIZON: u32 = 12;
pub const DEFAULT_ZERO_ORDER_CAP: u64 = 4096;
pub const DEFAULT_M_CAP: u32 = 32;
pub const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Clone, Debug)]
pub struct Config {
    /// Ambient dimension; `None` means "infer from inputs".
    pub dim: Option<usize>,
    pub radius: u64,
    pub horizon: u32,
    pub zero_order_cap: u64,
    pub m_cap: u32,
    pub precision_bits: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            dim: None,
            radius: DEFAULT_RADIUS,
            horizon: DEFAULT_HORIZON,
            zero_order_cap: DEFAULT_ZERO_ORDER_CAP,
            m_cap: DEFAULT_M_CAP,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}

impl Config {
    pub fn to_json(&self, dim: usize) -> Value {
        json!({
            "dim": dim,
            "radius": self.radius,
            "horizon": self.horizon,
            "zero_order_cap": self.zero_order_cap,
            "m_cap": self.m_cap,
            "precision_bits": self.precision_bits,
        })
    }
}
