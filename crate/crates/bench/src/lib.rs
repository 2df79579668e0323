//! Shared fixtures for the benchmarks.

use skellam_fields::fractional_field::FsrfModel;
use skellam_fields::skellam_field::SkellamParams;

pub fn rates() -> SkellamParams {
    SkellamParams::new(2.0, 1.0).expect("valid rates")
}

pub fn type_one() -> FsrfModel {
    FsrfModel::type_one(SkellamParams::new(0.8, 0.7).unwrap(), 0.7, 0.7).expect("valid model")
}

pub fn type_two() -> FsrfModel {
    FsrfModel::type_two(SkellamParams::new(0.5, 0.25).unwrap(), 0.8).expect("valid model")
}

pub fn type_three() -> FsrfModel {
    FsrfModel::type_three(rates(), 0.9, 0.8, 0.7, 0.9).expect("valid model")
}
