//! Memoryless binary-input output-symmetric channels and their LLRs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::codes::check_binary;
use crate::error::{Error, Result};

/// Magnitude substituted for the infinite LLR of an unerased BEC symbol.
pub const DEFAULT_BEC_LARGE: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    Bsc { p: f64 },
    Awgn { sigma: f64 },
    Bec { eps: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelTag {
    Bsc,
    Awgn,
    Bec,
    Raw,
}

impl ChannelTag {
    pub fn name(self) -> &'static str {
        match self {
            ChannelTag::Bsc => "bsc",
            ChannelTag::Awgn => "awgn",
            ChannelTag::Bec => "bec",
            ChannelTag::Raw => "raw",
        }
    }
}

impl Channel {
    /// BSC accepts `p` in `(0, 1/2]`, BEC accepts `eps` in `(0, 1]`; the
    /// closed ends are the uninformative channels.
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            Channel::Bsc { p } => p > 0.0 && p <= 0.5,
            Channel::Awgn { sigma } => sigma > 0.0 && sigma.is_finite(),
            Channel::Bec { eps } => eps > 0.0 && eps <= 1.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(format!("channel parameter out of range: {self}")))
        }
    }

    pub fn tag(self) -> ChannelTag {
        match self {
            Channel::Bsc { .. } => ChannelTag::Bsc,
            Channel::Awgn { .. } => ChannelTag::Awgn,
            Channel::Bec { .. } => ChannelTag::Bec,
        }
    }

    /// True when the LLR alphabet is finite (outputs repeat across trials).
    pub fn is_discrete(self) -> bool {
        !matches!(self, Channel::Awgn { .. })
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Bsc { p } => write!(f, "bsc:p={p}"),
            Channel::Awgn { sigma } => write!(f, "awgn:sigma={sigma}"),
            Channel::Bec { eps } => write!(f, "bec:eps={eps}"),
        }
    }
}

impl serde::Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Channel {
    type Err = Error;

    /// `bsc:p=0.01`, `awgn:sigma=0.8`, `bec:eps=0.3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::parse(format!("channel `{s}`"), msg.to_string());
        let (kind, param) = s.trim().split_once(':').ok_or_else(|| bad("expected `kind:key=value`"))?;
        let (key, value) = param.split_once('=').ok_or_else(|| bad("expected `key=value`"))?;
        let value: f64 = value.trim().parse().map_err(|_| bad("parameter is not a number"))?;
        let channel = match (kind.trim(), key.trim()) {
            ("bsc", "p") => Channel::Bsc { p: value },
            ("awgn", "sigma") => Channel::Awgn { sigma: value },
            ("bec", "eps") => Channel::Bec { eps: value },
            _ => return Err(bad("unknown channel or parameter name")),
        };
        channel.validate()
    }
}

/// Channel output for a block.
#[derive(Clone, Debug, PartialEq)]
pub enum Received {
    Bits(Vec<u8>),
    Real(Vec<f64>),
    /// `None` marks an erasure.
    Erasures(Vec<Option<u8>>),
}

impl Received {
    pub fn len(&self) -> usize {
        match self {
            Received::Bits(v) => v.len(),
            Received::Real(v) => v.len(),
            Received::Erasures(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-variable log-likelihood ratios with the channel they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector {
    values: Vec<f64>,
    tag: ChannelTag,
}

impl LlrVector {
    pub fn new(values: Vec<f64>, tag: ChannelTag) -> Self {
        LlrVector { values, tag }
    }

    pub fn raw(values: Vec<f64>) -> Self {
        Self::new(values, ChannelTag::Raw)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn tag(&self) -> ChannelTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// I.i.d. channel use for every bit of `x`, reproducible from `seed`.
pub fn sample_channel(x: &[u8], channel: Channel, seed: u64) -> Result<Received> {
    check_binary(x, x.len())?;
    channel.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match channel {
        Channel::Bsc { p } => Received::Bits(
            x.iter()
                .map(|&b| if rng.random::<f64>() < p { b ^ 1 } else { b })
                .collect(),
        ),
        Channel::Awgn { sigma } => {
            let noise = Normal::new(0.0, sigma)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            Received::Real(
                x.iter()
                    .map(|&b| if b == 0 { 1.0 } else { -1.0 } + noise.sample(&mut rng))
                    .collect(),
            )
        }
        Channel::Bec { eps } => Received::Erasures(
            x.iter()
                .map(|&b| if rng.random::<f64>() < eps { None } else { Some(b) })
                .collect(),
        ),
    })
}

pub fn llr(y: &Received, channel: Channel) -> Result<LlrVector> {
    llr_with_clamp(y, channel, DEFAULT_BEC_LARGE)
}

/// LLRs of a received block; `bec_large` replaces the infinite BEC values.
pub fn llr_with_clamp(y: &Received, channel: Channel, bec_large: f64) -> Result<LlrVector> {
    channel.validate()?;
    let mismatch = || Error::InvalidParameter(format!("received block does not match {channel}"));
    let values = match (channel, y) {
        (Channel::Bsc { p }, Received::Bits(bits)) => {
            let mag = ((1.0 - p) / p).ln();
            bits.iter()
                .map(|&b| match b {
                    0 => Ok(mag),
                    1 => Ok(-mag),
                    _ => Err(Error::InvalidParameter("received bits must be 0 or 1".into())),
                })
                .collect::<Result<Vec<_>>>()?
        }
        (Channel::Awgn { sigma }, Received::Real(ys)) => {
            ys.iter().map(|&yi| 2.0 * yi / (sigma * sigma)).collect()
        }
        (Channel::Bec { .. }, Received::Erasures(ys)) => ys
            .iter()
            .map(|yi| match yi {
                None => 0.0,
                Some(0) => bec_large,
                Some(_) => -bec_large,
            })
            .collect(),
        _ => return Err(mismatch()),
    };
    Ok(LlrVector::new(values, channel.tag()))
}

/// Replaces every BSC LLR by its sign; zeros stay zero.
pub fn normalize_bsc_pm1(l: &LlrVector) -> Result<LlrVector> {
    if l.tag() != ChannelTag::Bsc {
        return Err(Error::WrongChannel {
            expected: "bsc",
            found: l.tag().name(),
        });
    }
    let values = l
        .values()
        .iter()
        .map(|&v| {
            if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(LlrVector::new(values, ChannelTag::Bsc))
}

/// Sets the masked entries to exactly zero.
pub fn apply_puncture(l: &LlrVector, mask: &[usize]) -> Result<LlrVector> {
    let mut values = l.values().to_vec();
    for &i in mask {
        let slot = values.get_mut(i).ok_or(Error::IndexOutOfRange {
            what: "punctured variable",
            index: i,
            bound: l.len(),
        })?;
        *slot = 0.0;
    }
    Ok(LlrVector::new(values, l.tag()))
}
