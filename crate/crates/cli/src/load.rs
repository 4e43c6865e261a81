//! Reading input files into core types, with the path in every diagnostic.

use std::fs;
use std::path::Path;

use chiral_core::chirality::WeightFunction;
use chiral_core::io::{parse_weights, RepresentationFile, SemigroupFile, TwistFile};
use chiral_core::partial::{wagner_preston, Representation};
use chiral_core::semigroup::InverseSemigroup;
use chiral_core::twist::TwistData;

use crate::commands::CliError;
use crate::Inputs;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

fn at(path: &Path) -> impl Fn(chiral_core::Error) -> CliError + '_ {
    move |e| CliError::Run(format!("{}: {e}", path.display()))
}

pub fn semigroup_file(inputs: &Inputs) -> Result<SemigroupFile, CliError> {
    SemigroupFile::parse(&read(&inputs.input)?).map_err(at(&inputs.input))
}

pub fn inverse_semigroup(inputs: &Inputs) -> Result<InverseSemigroup, CliError> {
    semigroup_file(inputs)?.to_inverse().map_err(at(&inputs.input))
}

pub fn twist(inputs: &Inputs, s: &InverseSemigroup) -> Result<TwistData, CliError> {
    match &inputs.twist {
        None => Ok(TwistData::trivial(s.order())),
        Some(path) => TwistFile::parse(s.order(), &read(path)?).map_err(at(path)),
    }
}

pub fn representation(inputs: &Inputs, s: &InverseSemigroup) -> Result<Representation, CliError> {
    match &inputs.rep {
        None => wagner_preston(s).map_err(at(&inputs.input)),
        Some(path) => RepresentationFile::parse(s, &read(path)?).map_err(at(path)),
    }
}

pub fn weights(inputs: &Inputs) -> Result<WeightFunction, CliError> {
    match &inputs.weights {
        None => Ok(WeightFunction::Constant),
        Some(path) => parse_weights(&read(path)?).map_err(at(path)),
    }
}
