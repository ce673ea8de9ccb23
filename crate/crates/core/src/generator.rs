//! End-to-end ABCD+o generation.

use crate::assignment::{assign_communities, select_outliers, split_degrees};
use crate::construction::{build_graph, LabeledGraph};
use crate::distspec::PowerLawSpec;
use crate::rng::{self, stage};
use crate::sequences::{
    generate_community_sizes, generate_degrees, CommunitySizes, DegreeSequence,
};
use crate::{Error, Result};

/// Where node degrees come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeSource {
    PowerLaw(PowerLawSpec),
    Explicit(DegreeSequence),
}

/// Where community sizes come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SizeSource {
    PowerLaw(PowerLawSpec),
    Explicit(CommunitySizes),
}

/// Full parameterization of one ABCD+o graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    /// Number of nodes.
    pub n: usize,
    /// Number of outliers `s0`.
    pub outliers: usize,
    /// Mixing parameter: share of each degree sent to the background graph.
    pub xi: f64,
    pub degrees: DegreeSource,
    pub sizes: SizeSource,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be positive"));
        }
        if self.outliers >= self.n {
            return Err(Error::InvalidParameter("outlier count must be below n"));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::InvalidParameter("xi must lie in [0, 1]"));
        }
        let min_degree = match &self.degrees {
            DegreeSource::PowerLaw(spec) => spec.min(),
            DegreeSource::Explicit(seq) => {
                if seq.len() != self.n {
                    return Err(Error::InvalidParameter(
                        "explicit degree sequence length must be n",
                    ));
                }
                seq.min_degree()
            }
        };
        let min_size = match &self.sizes {
            SizeSource::PowerLaw(spec) => spec.min(),
            SizeSource::Explicit(sizes) => {
                if sizes.total() != self.n - self.outliers {
                    return Err(Error::InvalidParameter(
                        "explicit community sizes must sum to n minus the outlier count",
                    ));
                }
                *sizes.as_slice().last().expect("non-empty")
            }
        };
        if min_size < min_degree + 1 {
            return Err(Error::InvalidParameter(
                "minimum community size must be at least minimum degree + 1",
            ));
        }
        Ok(())
    }

    /// Draws (or takes) the degree and community-size sequences.
    pub fn sequences(&self) -> Result<(DegreeSequence, CommunitySizes)> {
        self.validate()?;
        let degrees = match &self.degrees {
            DegreeSource::PowerLaw(spec) => {
                generate_degrees(spec, self.n, &mut rng::stream(self.seed, stage::DEGREES))?
            }
            DegreeSource::Explicit(seq) => seq.clone(),
        };
        let sizes = match &self.sizes {
            SizeSource::PowerLaw(spec) => generate_community_sizes(
                spec,
                self.n - self.outliers,
                &mut rng::stream(self.seed, stage::SIZES),
            )?,
            SizeSource::Explicit(sizes) => sizes.clone(),
        };
        Ok((degrees, sizes))
    }
}

/// Generates a graph from `params`.
pub fn generate(params: &GeneratorParams) -> Result<LabeledGraph> {
    let (degrees, sizes) = params.sequences()?;
    generate_from_sequences(params, &degrees, &sizes)
}

/// Generates a graph from fixed sequences, ignoring the sources in
/// `params`. Used to couple several graphs to the same sequences.
pub fn generate_from_sequences(
    params: &GeneratorParams,
    degrees: &DegreeSequence,
    sizes: &CommunitySizes,
) -> Result<LabeledGraph> {
    if degrees.len() != params.n || sizes.total() + params.outliers != params.n {
        return Err(Error::InvalidParameter(
            "sequences do not match n and the outlier count",
        ));
    }
    if !(0.0..=1.0).contains(&params.xi) {
        return Err(Error::InvalidParameter("xi must lie in [0, 1]"));
    }
    let seed = params.seed;
    let outliers = select_outliers(
        degrees,
        params.outliers,
        params.xi,
        &mut rng::stream(seed, stage::OUTLIERS),
    )?;
    let assignment = assign_communities(
        degrees,
        &outliers,
        sizes,
        params.xi,
        &mut rng::stream(seed, stage::ASSIGNMENT),
    )?;
    let split = split_degrees(
        &assignment,
        degrees,
        params.xi,
        &mut rng::stream(seed, stage::SPLIT),
    )?;
    build_graph(params, degrees, &assignment, &split)
}
