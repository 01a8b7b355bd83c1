//! Named families of mode generators on a circle target.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bracket::{BracketTable, LocalDensity};
use super::fourier::{fourier_bracket, FourierClass};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;
use crate::jetcalc::{DiffPoly, JetVar};

/// Mode families, all built from the first field `x1` and `∂_τ x1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `i e^{imσ} ∂_z x`
    #[serde(rename = "heis+")]
    HeisPlus,
    /// `i e^{imσ} ∂_z̄ x`
    #[serde(rename = "heis-")]
    HeisMinus,
    /// `−i e^{imσ} (∂_z x)²`
    #[serde(rename = "vir+")]
    VirPlus,
    /// `−i e^{imσ} (∂_z̄ x)²`
    #[serde(rename = "vir-")]
    VirMinus,
    /// `−(i/2) e^{imσ} ((∂_τ x)² − (∂_σ x)²)`
    #[serde(rename = "hamiltonian")]
    Hamiltonian,
    /// `−i e^{imσ} ∂_τ x`
    #[serde(rename = "momentum")]
    Momentum,
    /// `e^{imσ} ∂_σ x`
    #[serde(rename = "winding")]
    Winding,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::HeisPlus,
        Family::HeisMinus,
        Family::VirPlus,
        Family::VirMinus,
        Family::Hamiltonian,
        Family::Momentum,
        Family::Winding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::HeisPlus => "heis+",
            Family::HeisMinus => "heis-",
            Family::VirPlus => "vir+",
            Family::VirMinus => "vir-",
            Family::Hamiltonian => "hamiltonian",
            Family::Momentum => "momentum",
            Family::Winding => "winding",
        }
    }

    /// Density of the mode `m`.
    pub fn density(self, m: i64) -> LocalDensity {
        let i = Scalar::i();
        let xt = DiffPoly::var(JetVar::new(0, 1, 0));
        let xs = DiffPoly::var(JetVar::new(0, 0, 1));
        let body = match self {
            Family::HeisPlus => DiffPoly::dz(0).scale(&i),
            Family::HeisMinus => DiffPoly::dzb(0).scale(&i),
            Family::VirPlus => DiffPoly::dz(0).pow(2).scale(&-i.clone()),
            Family::VirMinus => DiffPoly::dzb(0).pow(2).scale(&-i.clone()),
            Family::Hamiltonian => (xt.pow(2) - xs.pow(2)).scale(&Scalar::complex((0, 1), (-1, 2))),
            Family::Momentum => xt.scale(&-i.clone()),
            Family::Winding => xs,
        };
        LocalDensity::new(&DiffPoly::trig(m) * &body).expect("σ-jets only")
    }

    pub fn class(self, m: i64) -> FourierClass {
        FourierClass::new(&self.density(m))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// One entry `{∫A_m, ∫B_n}` of a structure-constant table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub left: (Family, i64),
    pub right: (Family, i64),
    pub value: FourierClass,
}

/// Brackets of every ordered pair of generators drawn from `families × modes`.
pub fn mode_structure_constants(
    families: &[&str],
    modes: &[i64],
    t: &BracketTable,
) -> Result<Vec<StructureConstant>> {
    let fams: Vec<Family> = families.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let gens: Vec<(Family, i64)> = fams
        .iter()
        .flat_map(|f| modes.iter().map(move |m| (*f, *m)))
        .collect();
    let classes: Vec<FourierClass> = gens.iter().map(|(f, m)| f.class(*m)).collect();
    let mut out = Vec::with_capacity(gens.len() * gens.len());
    for (a, ca) in gens.iter().zip(&classes) {
        for (b, cb) in gens.iter().zip(&classes) {
            out.push(StructureConstant {
                left: *a,
                right: *b,
                value: fourier_bracket(ca, cb, t),
            });
        }
    }
    Ok(out)
}
