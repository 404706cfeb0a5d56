use crate::channels::LlrVector;
use crate::codes::{TannerCode, Word};
use crate::error::{Error, Result};
use crate::numeric::{Rational, Weight};

#[derive(Clone, Debug, PartialEq)]
pub struct MlResult<T> {
    /// Every codeword attaining the minimum, in enumeration order.
    pub minimizers: Vec<Word>,
    pub unique: bool,
    pub cost: T,
}

/// Holds the codeword list of a code so repeated decodes skip enumeration.
#[derive(Clone, Debug)]
pub struct MlDecoder {
    n: usize,
    codewords: Vec<Word>,
}

impl MlDecoder {
    pub fn new(tc: &TannerCode) -> Result<Self> {
        Ok(MlDecoder {
            n: tc.n(),
            codewords: tc.enumerate_codewords()?,
        })
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    /// Minimizers of `<λ, x>`; costs within the weight type's tie rule of
    /// the minimum all count as minimizers.
    pub fn decode<T: Weight>(&self, llr: &[T]) -> Result<MlResult<T>> {
        if llr.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: llr.len(),
            });
        }
        let costs: Vec<T> = self
            .codewords
            .iter()
            .map(|c| {
                c.iter()
                    .zip(llr)
                    .filter(|(&b, _)| b == 1)
                    .fold(T::zero(), |acc, (_, &l)| acc + l)
            })
            .collect();
        let best = costs
            .iter()
            .copied()
            .fold(None, |acc: Option<T>, c| match acc {
                Some(a) if a <= c => Some(a),
                _ => Some(c),
            })
            .expect("every code contains the zero word");
        let minimizers: Vec<Word> = self
            .codewords
            .iter()
            .zip(&costs)
            .filter(|(_, &c)| (c - best).is_tie())
            .map(|(w, _)| w.clone())
            .collect();
        Ok(MlResult {
            unique: minimizers.len() == 1,
            minimizers,
            cost: best,
        })
    }
}

pub fn decode_ml(tc: &TannerCode, l: &LlrVector) -> Result<MlResult<f64>> {
    MlDecoder::new(tc)?.decode(l.values())
}

pub fn decode_ml_exact(tc: &TannerCode, l: &[Rational]) -> Result<MlResult<Rational>> {
    MlDecoder::new(tc)?.decode(l)
}
