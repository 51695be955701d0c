//! Piecewise-constant control signals over a symbolic port alphabet.
//!
//! A [`ControlSignal`] is a finite list of `(symbol, duration)` pieces kept in
//! canonical form: no zero-length pieces and no two neighbouring pieces with
//! the same symbol. Signals that agree almost everywhere therefore compare
//! equal with plain `==`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One actuator input. `Port(k)` asks the robot to leave a vertex through
/// port `k` (and to keep moving while inside an edge); `Halt` stops it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Port(usize),
    Halt,
}

impl Symbol {
    /// `Port(0..width)` followed by `Halt`, the order used for enumeration
    /// and tie-breaking.
    pub fn alphabet(width: usize) -> Vec<Symbol> {
        (0..width).map(Symbol::Port).chain([Symbol::Halt]).collect()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Port(k) => write!(f, "P{k}"),
            Symbol::Halt => f.write_str("H"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece<S> {
    pub symbol: Symbol,
    pub duration: S,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlSignal<S> {
    pieces: Vec<Piece<S>>,
    duration: S,
}

impl<S: Scalar> Default for ControlSignal<S> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<S: Scalar> ControlSignal<S> {
    /// The signal of duration zero.
    pub fn empty() -> Self {
        ControlSignal {
            pieces: Vec::new(),
            duration: S::zero(),
        }
    }

    /// Builds a canonical signal, merging neighbours and dropping empty pieces.
    pub fn from_pieces<I>(pieces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Symbol, S)>,
    {
        let mut signal = Self::empty();
        for (symbol, duration) in pieces {
            if duration.is_negative() {
                return Err(Error::validation(format!(
                    "piece {symbol} has negative duration {duration:?}"
                )));
            }
            signal.push(symbol, duration);
        }
        Ok(signal)
    }

    pub fn constant(symbol: Symbol, duration: S) -> Self {
        let mut signal = Self::empty();
        if !duration.is_negative() {
            signal.push(symbol, duration);
        }
        signal
    }

    /// One unit-duration piece per symbol.
    pub fn discrete(symbols: &[Symbol]) -> Self {
        let mut signal = Self::empty();
        for &symbol in symbols {
            signal.push(symbol, S::one());
        }
        signal
    }

    fn push(&mut self, symbol: Symbol, duration: S) {
        if duration.is_zero() {
            return;
        }
        self.duration = self.duration.clone() + duration.clone();
        match self.pieces.last_mut() {
            Some(last) if last.symbol == symbol => {
                last.duration = last.duration.clone() + duration;
            }
            _ => self.pieces.push(Piece { symbol, duration }),
        }
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    /// Total duration `|u|`.
    pub fn duration(&self) -> &S {
        &self.duration
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The symbol in force at time `t`, or `None` outside `[0, |u|)`.
    pub fn symbol_at(&self, t: &S) -> Option<Symbol> {
        if t.is_negative() {
            return None;
        }
        let mut start = S::zero();
        for piece in &self.pieces {
            let end = start.clone() + piece.duration.clone();
            if *t < end {
                return Some(piece.symbol);
            }
            start = end;
        }
        None
    }

    /// `self ⊕ other`: `self` followed by `other` shifted by `|self|`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for piece in &other.pieces {
            out.push(piece.symbol, piece.duration.clone());
        }
        out
    }

    /// The restriction to `[0, t)`; the whole signal when `t ≥ |u|`.
    pub fn restrict_before(&self, t: &S) -> Self {
        if *t >= self.duration {
            return self.clone();
        }
        let mut out = Self::empty();
        let mut remaining = t.clone();
        for piece in &self.pieces {
            if !remaining.is_positive() {
                break;
            }
            let take = S::min_of(remaining.clone(), piece.duration.clone());
            remaining = remaining - take.clone();
            out.push(piece.symbol, take);
        }
        out
    }

    /// The final segment starting at `t`, re-based to start at zero.
    pub fn suffix_from(&self, t: &S) -> Result<Self> {
        if t.is_negative() || *t > self.duration {
            return Err(Error::validation(format!(
                "suffix start {t:?} outside [0, {:?}]",
                self.duration
            )));
        }
        let mut out = Self::empty();
        let mut skip = t.clone();
        for piece in &self.pieces {
            if skip >= piece.duration {
                skip = skip - piece.duration.clone();
                continue;
            }
            out.push(piece.symbol, piece.duration.clone() - skip.clone());
            skip = S::zero();
        }
        Ok(out)
    }

    /// `self ◁ other`: strictly shorter and an initial segment of `other`.
    pub fn is_strict_prefix(&self, other: &Self) -> bool {
        self.duration < other.duration && other.restrict_before(&self.duration) == *self
    }

    /// The L1-type distance with the discrete 0/1 metric on symbols:
    /// the measure of the overlap where the symbols differ, plus the
    /// difference in durations.
    pub fn distance(&self, other: &Self) -> S {
        let mut mismatch = S::zero();
        let mut a = self.pieces.iter();
        let mut b = other.pieces.iter();
        let mut cur_a = a.next().map(|p| (p.symbol, p.duration.clone()));
        let mut cur_b = b.next().map(|p| (p.symbol, p.duration.clone()));
        while let (Some((sa, ra)), Some((sb, rb))) = (cur_a.clone(), cur_b.clone()) {
            let step = S::min_of(ra.clone(), rb.clone());
            if sa != sb {
                mismatch = mismatch + step.clone();
            }
            let ra = ra - step.clone();
            let rb = rb - step;
            cur_a = if ra.is_zero() {
                a.next().map(|p| (p.symbol, p.duration.clone()))
            } else {
                Some((sa, ra))
            };
            cur_b = if rb.is_zero() {
                b.next().map(|p| (p.symbol, p.duration.clone()))
            } else {
                Some((sb, rb))
            };
        }
        mismatch + (self.duration.clone() - other.duration.clone()).abs()
    }

    /// A point on the straight path from `self` (at `s = 0`) to `other`
    /// (at `s = 1`). With `T0 ≤ T1` the durations of the endpoints, the
    /// result has duration `T0 + (T1 - T0)s` and follows the longer signal
    /// on `[0, T0·s)` and after `T0`, the shorter one in between. It
    /// satisfies `d(γ, self) + d(γ, other) = d(self, other)`.
    pub fn geodesic(&self, other: &Self, s: &S) -> Result<Self> {
        if s.is_negative() || *s > S::one() {
            return Err(Error::validation(format!(
                "geodesic parameter {s:?} outside [0, 1]"
            )));
        }
        if self.duration > other.duration {
            return other.geodesic(self, &(S::one() - s.clone()));
        }
        let (short, long) = (self, other);
        let t0 = short.duration.clone();
        let t1 = long.duration.clone();
        let split = t0.clone() * s.clone();
        let total = t0.clone() + (t1 - t0.clone()) * s.clone();
        let head = long.restrict_before(&split);
        let middle = short.suffix_from(&split)?;
        let tail = long.restrict_before(&total).suffix_from(&t0)?;
        Ok(head.concat(&middle).concat(&tail))
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for ControlSignal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("∅");
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", piece.symbol, piece.duration)?;
        }
        Ok(())
    }
}
