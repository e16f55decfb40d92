//! Canonical states used by the scenario table, the CLI fixture library and
//! tests.

use crate::classify::{make_cq, make_separable, BasisSpec};
use crate::qcore::linalg::*;
use crate::qcore::state::{DensityMatrix, Dims, PureState};

fn qubit(entries: [f64; 4]) -> DensityMatrix {
    DensityMatrix::new(Dims::single(2), from_real_rows(2, 2, &entries)).expect("valid qubit state")
}

pub fn zero() -> DensityMatrix {
    qubit([1.0, 0.0, 0.0, 0.0])
}

pub fn one() -> DensityMatrix {
    qubit([0.0, 0.0, 0.0, 1.0])
}

pub fn plus() -> DensityMatrix {
    qubit([0.5, 0.5, 0.5, 0.5])
}

pub fn minus() -> DensityMatrix {
    qubit([0.5, -0.5, -0.5, 0.5])
}

pub fn bell_vector() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(Dims::new(2, 2), ComplexVector::from_column_slice(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)]))
        .expect("normalized")
}

/// `|Φ+⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell() -> DensityMatrix {
    bell_vector().density()
}

/// `(1-p) I/4 + p |Φ+⟩⟨Φ+|`.
pub fn werner(p: f64) -> DensityMatrix {
    let m = identity(4) * c((1.0 - p) / 4.0, 0.0) + bell().matrix() * c(p, 0.0);
    DensityMatrix::new(Dims::new(2, 2), m).expect("werner state for p in [-1/3, 1]")
}

/// `(¾|0⟩⟨0| + ¼|1⟩⟨1|) ⊗ |0⟩⟨0|`.
pub fn incoherent_product() -> DensityMatrix {
    qubit([0.75, 0.0, 0.0, 0.25]).tensor(&zero()).expect("2x2")
}

/// `|+⟩⟨+| ⊗ |0⟩⟨0|`.
pub fn coherent_product() -> DensityMatrix {
    plus().tensor(&zero()).expect("2x2")
}

/// `½|+⟩⟨+|⊗|0⟩⟨0| + ½|−⟩⟨−|⊗|1⟩⟨1|`: classical-quantum in the Hadamard
/// basis, locally incoherent on A, path-polarization correlated.
pub fn cq() -> DensityMatrix {
    make_cq(&[0.5, 0.5], &BasisSpec::hadamard(), &[zero(), one()]).expect("2x2")
}

/// `½|0⟩⟨0|⊗|0⟩⟨0| + ½|1⟩⟨1|⊗|+⟩⟨+|`.
pub fn cq_computational() -> DensityMatrix {
    make_cq(&[0.5, 0.5], &BasisSpec::computational(2), &[zero(), plus()]).expect("2x2")
}

/// `½|0⟩⟨0|⊗|0⟩⟨0| + ½|+⟩⟨+|⊗|1⟩⟨1|`: separable with nonzero A-side discord.
pub fn discordant_separable() -> DensityMatrix {
    make_separable(&[0.5, 0.5], &[zero(), plus()], &[zero(), one()]).expect("2x2")
}

/// Rows of the built-in scenario table, in display order.
pub fn table_set() -> Vec<(&'static str, DensityMatrix)> {
    vec![
        ("incoherent_product", incoherent_product()),
        ("coherent_product", coherent_product()),
        ("cq", cq()),
        ("discordant_separable", discordant_separable()),
        ("werner_0.2", werner(0.2)),
        ("werner_0.9", werner(0.9)),
        ("bell", bell()),
    ]
}

/// Every named fixture.
pub fn by_name(name: &str) -> Option<DensityMatrix> {
    Some(match name {
        "zero" => zero(),
        "one" => one(),
        "plus" => plus(),
        "minus" => minus(),
        "maximally_mixed" => DensityMatrix::maximally_mixed(Dims::new(2, 2)),
        "maximally_mixed_qubit" => DensityMatrix::maximally_mixed(Dims::single(2)),
        "bell" => bell(),
        "plus_times_zero" | "coherent_product" => coherent_product(),
        "incoherent_product" => incoherent_product(),
        "cq" => cq(),
        "cq_computational" => cq_computational(),
        "discordant_separable" => discordant_separable(),
        "werner_0.2" => werner(0.2),
        "werner_0.9" => werner(0.9),
        "werner_1/3" => werner(1.0 / 3.0),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &[
    "zero",
    "one",
    "plus",
    "minus",
    "maximally_mixed",
    "maximally_mixed_qubit",
    "bell",
    "plus_times_zero",
    "incoherent_product",
    "cq",
    "cq_computational",
    "discordant_separable",
    "werner_0.2",
    "werner_0.9",
    "werner_1/3",
];
