//! Published count datasets used in the examples and tests.

use crate::data::FrequencyData;

/// Bacterial clumps per field in a milk film, counts 0..=19.
pub const BACTERIAL: [u64; 20] = [
    56, 104, 80, 62, 42, 27, 9, 9, 5, 3, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1,
];

/// Male children in 6115 Saxon families of 12 children, counts 0..=12.
pub const SAXONY: [u64; 13] = [3, 24, 104, 286, 670, 1033, 1343, 1112, 829, 478, 181, 45, 7];

/// Eggs per linnet nest, counts 1..=7 (no empty nests are recorded).
pub const LINNET: [u64; 7] = [18, 35, 210, 1355, 3492, 299, 5];

/// Weekly trips by Dutch car-owning households, counts 0..=17.
pub const TRIP: [u64; 18] = [
    75, 312, 384, 421, 307, 183, 77, 47, 15, 9, 5, 0, 0, 1, 2, 0, 0, 1,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Bacterial,
    Saxony,
    Linnet,
    Trip,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [Self::Bacterial, Self::Saxony, Self::Linnet, Self::Trip];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bacterial => "bacterial",
            Self::Saxony => "saxony",
            Self::Linnet => "linnet",
            Self::Trip => "trip",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn data(self) -> FrequencyData {
        let (start, freqs, truncated): (usize, &[u64], bool) = match self {
            Self::Bacterial => (0, &BACTERIAL, false),
            Self::Saxony => (0, &SAXONY, false),
            Self::Linnet => (1, &LINNET, true),
            Self::Trip => (0, &TRIP, false),
        };
        FrequencyData::from_frequencies(start, freqs, truncated).expect("fixture is valid")
    }
}

/// Published MCMPB expected frequencies for the bacterial data, counts 0..=19.
pub const BACTERIAL_EXPECTED: [f64; 20] = [
    60.65, 91.01, 86.79, 65.14, 42.07, 24.62, 13.51, 7.13, 3.70, 1.92, 1.01, 0.56, 0.32, 0.20,
    0.14, 0.11, 0.10, 0.12, 0.21, 0.69,
];

/// Published MCMPB expected frequencies for the Saxony data, counts 0..=12.
pub const SAXONY_EXPECTED: [f64; 13] = [
    2.22, 21.49, 102.00, 308.64, 659.30, 1045.91, 1264.63, 1177.77, 842.95, 456.07, 179.65, 47.54,
    6.84,
];
