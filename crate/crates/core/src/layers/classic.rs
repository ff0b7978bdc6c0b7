use std::str::FromStr;

use super::{Cascade, FirFilterLayer, Model, ParallelSumModel, PowerMode, StaticPowerLayer};
use crate::error::{Error, Result};

/// Block-structured models built from filters and static powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicKind {
    /// filter then `(.)^P`
    Wiener,
    /// `(.)^P` then filter
    Hammerstein,
    /// `(.)^P`, filter, `(.)^Q`
    HammersteinWiener,
    /// `sum_p` filter_p((.)^p) for `p = 1..=P`
    ParallelHammerstein,
}

impl FromStr for ClassicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wiener" => Ok(Self::Wiener),
            "hammerstein" => Ok(Self::Hammerstein),
            "hammerstein_wiener" => Ok(Self::HammersteinWiener),
            "parallel_hammerstein" => Ok(Self::ParallelHammerstein),
            other => Err(Error::InvalidKind(other.to_string())),
        }
    }
}

fn power(p: usize) -> Result<StaticPowerLayer> {
    StaticPowerLayer::new(p, PowerMode::RawPower)
}

/// Builds a classic model with unit-impulse filters; set the taps afterwards
/// with [`super::Block::set_params`]. `q` is only used by Hammerstein-Wiener.
pub fn make_classic_model(kind: ClassicKind, memory: usize, p: usize, q: usize) -> Result<Model> {
    if memory == 0 || p == 0 || q == 0 {
        return Err(Error::InvalidConfig("M, P and Q must all be >= 1".into()));
    }
    let fir = || FirFilterLayer::identity(memory);
    Ok(match kind {
        ClassicKind::Wiener => Model::Cascade(Cascade::new(vec![fir()?.into(), power(p)?.into()])?),
        ClassicKind::Hammerstein => {
            Model::Cascade(Cascade::new(vec![power(p)?.into(), fir()?.into()])?)
        }
        ClassicKind::HammersteinWiener => Model::Cascade(Cascade::new(vec![
            power(p)?.into(),
            fir()?.into(),
            power(q)?.into(),
        ])?),
        ClassicKind::ParallelHammerstein => {
            let branches = (1..=p)
                .map(|order| Cascade::new(vec![power(order)?.into(), fir()?.into()]))
                .collect::<Result<Vec<_>>>()?;
            Model::ParallelSum(ParallelSumModel::new(branches)?)
        }
    })
}
