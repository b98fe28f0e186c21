use crate::network::RegionIndex;

/// Errors shared across the crate.
///
/// Coordinate and threshold indices in error payloads are 0-based, matching
/// the public API (the first variable is coordinate 0, the lowest threshold
/// of a ladder is level 0).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GlassError {
    /// A point sits exactly on a threshold, so its region is undefined.
    #[error("coordinate {coord} lies exactly on threshold level {level}")]
    OnWall { coord: usize, level: usize },

    /// The focal map has no entry for a region that an operation needs.
    #[error("no focal point defined for region {0}")]
    MissingFocal(RegionIndex),

    /// Two exit candidates occur at the same time; the successor region is
    /// ambiguous and the framework refuses to pick one.
    #[error("coordinates {first} and {second} reach their thresholds simultaneously")]
    SimultaneousSwitch { first: usize, second: usize },

    /// A point handed to an operation is not strictly inside the stated region.
    #[error("point is not strictly inside region {region}: coordinate {coord} out of band")]
    PointNotInRegion { region: RegionIndex, coord: usize },

    /// A simulation start on two or more walls at once (a corner), or on a
    /// wall that no adjacent flow crosses; there is no unambiguous entry region.
    #[error("start point has no unambiguous entry region: {reason}")]
    AmbiguousStart { reason: String },

    /// Focal coordinate of the exit variable is zero in centered coordinates,
    /// so the trajectory never reaches the exit wall.
    #[error("focal coordinate {coord} lies on the exit wall; wall map undefined")]
    FocalOnWall { coord: usize },

    /// A fractional map was applied outside its domain (denominator <= 0).
    #[error("linear fractional map applied outside its domain: 1 + <psi, x> = {factor}")]
    OutOfDomain { factor: f64 },

    /// A point fails the cone membership required by the Hilbert metric.
    #[error("point is not in the cone interior: coordinate {coord}")]
    NotInCone { coord: usize },

    /// Power iteration failed to settle on a dominant direction.
    #[error("eigen-iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// An embedded point does not satisfy the consistency relations of the
    /// embedding image subspace.
    #[error("point is not on the embedded subspace: variable {var}, spread {spread:e}")]
    NotOnSubspace { var: usize, spread: f64 },

    /// Compression applies to binary networks only.
    #[error("operation requires a binary network (one threshold per variable)")]
    NotBinary,

    /// Recentering requires a nonempty spine.
    #[error("cycle has an empty spine; recentering at a spine vertex is undefined")]
    NotNonIdeal,

    /// Two cycle regions became identical after dropping never-switching
    /// coordinates; the compressed cycle is ill-formed.
    #[error("compression collapses regions {first} and {second}")]
    CompressionCollision { first: RegionIndex, second: RegionIndex },

    /// Consecutive cycle regions do not share a wall.
    #[error("cycle regions at positions {from_pos} and {to_pos} are not adjacent")]
    NonAdjacentRegions { from_pos: usize, to_pos: usize },

    /// A region appears twice in a cycle specification.
    #[error("region {0} appears more than once in the cycle")]
    DuplicateRegion(RegionIndex),

    /// The cycle fails the unique-switching-coordinate conditions.
    #[error("cycle is not a cyclic attractor: {0}")]
    NotCyclicAttractor(CycleViolation),

    /// The classified fixed point fell outside the wall it must return to.
    #[error("fixed point is not strictly inside the base wall: coordinate {coord} = {value}")]
    ContainmentFailure { coord: usize, value: f64 },

    /// Structurally malformed input (mismatched lengths, out-of-range levels).
    #[error("malformed network: {0}")]
    Malformed(String),
}

/// Why a candidate cycle fails to be a cyclic attractor.
#[derive(Debug, Clone, PartialEq)]
pub enum CycleViolation {
    /// `|up ∪ down| != 1` in some region.
    MultipleSwitching { region: RegionIndex, coords: Vec<usize> },
    /// No switching coordinate at all in some region.
    NoSwitching { region: RegionIndex },
    /// The unique switching coordinate disagrees with the wall to the successor.
    WrongCoordinate { region: RegionIndex, switching: usize, wall: usize },
    /// The focal point drives the switching coordinate away from the successor.
    WrongDirection { region: RegionIndex, coord: usize },
    /// Consecutive regions are not wall-adjacent.
    NonAdjacent { from_pos: usize, to_pos: usize },
}

impl std::fmt::Display for CycleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CycleViolation::MultipleSwitching { region, coords } => {
                write!(f, "region {region} has {} switching coordinates {:?}", coords.len(), coords)
            }
            CycleViolation::NoSwitching { region } => {
                write!(f, "region {region} has no switching coordinate (focal point is interior)")
            }
            CycleViolation::WrongCoordinate { region, switching, wall } => {
                write!(f, "region {region} switches coordinate {switching} but the wall to its successor is on coordinate {wall}")
            }
            CycleViolation::WrongDirection { region, coord } => {
                write!(f, "region {region}: focal point moves coordinate {coord} away from the successor region")
            }
            CycleViolation::NonAdjacent { from_pos, to_pos } => {
                write!(f, "cycle positions {from_pos} and {to_pos} hold non-adjacent regions")
            }
        }
    }
}
