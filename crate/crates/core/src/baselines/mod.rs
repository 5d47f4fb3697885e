//! Comparison algorithms: single linkage, Gromov's tree fit and neighbor
//! joining.

mod gromov;
mod nj;
mod single_linkage;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub use gromov::gromov_tree_fit;
pub use nj::{neighbor_join, NjFit};
pub use single_linkage::single_linkage_ultrametric;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineChoice {
    Gromov,
    NeighborJoin,
    SingleLinkage,
}

impl BaselineChoice {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gromov => "gromov",
            Self::NeighborJoin => "nj",
            Self::SingleLinkage => "slhc",
        }
    }

    /// Whether the algorithm takes a base point.
    pub fn is_rooted(self) -> bool {
        self == Self::Gromov
    }
}

impl fmt::Display for BaselineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "gromov" => Ok(Self::Gromov),
            "nj" | "neighbor_join" => Ok(Self::NeighborJoin),
            "slhc" | "single_linkage" => Ok(Self::SingleLinkage),
            other => Err(Error::InvalidArgument(format!("unknown baseline {other:?}"))),
        }
    }
}
