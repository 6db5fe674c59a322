use core::fmt;
use core::str::FromStr;

/// Handling of the overall `1/4` weight of the four-component energy and charge.
///
/// `Paper` keeps the weight, so a single four-component particle carries
/// charge `1/4`. `Rescaled` drops it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Convention {
    #[default]
    Paper,
    Rescaled,
}

impl Convention {
    /// Weight applied to each of the four component sums.
    pub fn component_weight(self) -> f64 {
        match self {
            Convention::Paper => 0.25,
            Convention::Rescaled => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Rescaled => "rescaled",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Convention::Paper),
            "rescaled" => Ok(Convention::Rescaled),
            _ => Err("expected `paper` or `rescaled`"),
        }
    }
}
