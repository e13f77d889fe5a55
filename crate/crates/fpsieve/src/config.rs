use crate::level::ListEncoding;
use crate::{Error, Result};

/// Mining parameters.
#[derive(Clone, Debug)]
pub struct MiningConfig {
    /// Occurrence threshold: patterns below this support are not reported
    /// and infrequent elements never enter a conditional database.
    pub min_support: u32,
    /// Maximum pattern length (number of nested levels). `u32::MAX` means
    /// no practical limit.
    pub max_len: u32,
    /// Drop patterns whose support is explainable by statistical
    /// independence of prefix and last element.
    pub filter_enabled: bool,
    /// Width of the independence acceptance band, in standard deviations.
    pub sigma_multiplier: f64,
    /// Pull elements that occur in every conditional transaction out of the
    /// child database and attach them to emitted patterns as a group.
    pub grouping_enabled: bool,
    /// Store conditional lists as first-id-plus-gaps instead of absolute ids.
    pub delta_encoding: bool,
    /// Pack gaps into minimal-length varint bytes (implies gap storage).
    pub varint_storage: bool,
    /// For record-coded databases: skip intersections between items of the
    /// same variable, which are mutually exclusive by construction.
    pub exclusive_skip: bool,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 1,
            max_len: u32::MAX,
            filter_enabled: false,
            sigma_multiplier: 3.0,
            grouping_enabled: false,
            delta_encoding: false,
            varint_storage: false,
            exclusive_skip: false,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_support < 1 {
            return Err(Error::Config("min_support must be >= 1".into()));
        }
        if self.max_len < 1 {
            return Err(Error::Config("max_len must be >= 1".into()));
        }
        if !(self.sigma_multiplier > 0.0) {
            return Err(Error::Config("sigma_multiplier must be > 0".into()));
        }
        Ok(())
    }

    /// Storage layout implied by the encoding flags.
    pub fn encoding(&self) -> ListEncoding {
        if self.varint_storage {
            ListEncoding::VarintDelta
        } else if self.delta_encoding {
            ListEncoding::Delta
        } else {
            ListEncoding::Plain
        }
    }
}
