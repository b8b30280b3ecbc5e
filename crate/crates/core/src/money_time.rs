//! Money, calendar years and per-annum rates.
//!
//! Every amount is carried as pounds in an `f64` and is only rounded when it
//! is presented. Amounts are either in base-year ("real") money, i.e. the
//! purchasing power of the first horizon year, or nominal money of the day;
//! [`MoneyConvention`] labels which.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// An amount in pounds sterling.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Money(f64);

impl Money {
    pub const ZERO: Money = Money(0.0);

    /// Rejects NaN and infinities.
    pub fn new(pounds: f64) -> Result<Self> {
        if pounds.is_finite() {
            Ok(Money(pounds))
        } else {
            Err(Error::NonFinite(pounds))
        }
    }

    pub const fn pounds(pounds: i64) -> Self {
        Money(pounds as f64)
    }

    pub fn amount(self) -> f64 {
        self.0
    }

    /// Whole pounds, rounding half away from zero.
    pub fn rounded(self) -> i64 {
        self.0.round() as i64
    }

    pub fn abs(self) -> Self {
        Money(self.0.abs())
    }

    pub fn max(self, other: Money) -> Money {
        Money(self.0.max(other.0))
    }

    pub fn min(self, other: Money) -> Money {
        Money(self.0.min(other.0))
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0.0
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Mul<f64> for Money {
    type Output = Money;
    fn mul(self, rhs: f64) -> Money {
        Money(self.0 * rhs)
    }
}

impl Div<f64> for Money {
    type Output = Money;
    fn div(self, rhs: f64) -> Money {
        Money(self.0 / rhs)
    }
}

impl Div for Money {
    type Output = f64;
    fn div(self, rhs: Money) -> f64 {
        self.0 / rhs.0
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        Money(iter.map(|m| m.0).sum())
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

/// `£1,234` style, whole pounds.
impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.rounded();
        let digits = whole.unsigned_abs().to_string();
        let mut grouped = String::with_capacity(digits.len() + digits.len() / 3);
        for (i, c) in digits.chars().enumerate() {
            if i > 0 && (digits.len() - i).is_multiple_of(3) {
                grouped.push(',');
            }
            grouped.push(c);
        }
        let sign = if whole < 0 { "-" } else { "" };
        write!(f, "{sign}£{grouped}")
    }
}

/// A calendar year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Year(i32);

impl Year {
    pub const MIN: i32 = 1900;
    pub const MAX: i32 = 2200;

    pub fn new(year: i32) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&year) {
            Ok(Year(year))
        } else {
            Err(Error::YearOutOfRange(year))
        }
    }

    pub fn value(self) -> i32 {
        self.0
    }

    /// Whole years elapsed since `base`; negative when `self` precedes it.
    pub fn since(self, base: Year) -> i32 {
        self.0 - base.0
    }
}

impl fmt::Display for Year {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fractional per-annum rate, `0.02` for 2%.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);

    pub fn new(rate: f64) -> Result<Self> {
        if rate.is_finite() && rate > -1.0 {
            Ok(Rate(rate))
        } else {
            Err(Error::RateOutOfRange(rate))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}%", self.0 * 100.0)
    }
}

/// An inclusive span of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizon {
    start: Year,
    end: Year,
}

impl Horizon {
    pub fn new(start: Year, end: Year) -> Result<Self> {
        if start > end {
            return Err(Error::InvertedHorizon {
                start: start.value(),
                end: end.value(),
            });
        }
        Ok(Horizon { start, end })
    }

    pub fn start(&self) -> Year {
        self.start
    }

    pub fn end(&self) -> Year {
        self.end
    }

    /// Number of years, both ends included.
    pub fn len(&self) -> usize {
        (self.end.0 - self.start.0 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, year: Year) -> bool {
        self.start <= year && year <= self.end
    }

    pub fn years(&self) -> impl Iterator<Item = Year> {
        (self.start.0..=self.end.0).map(Year)
    }

    /// The year `offset` years after the start, if it is still in range.
    pub fn year_at(&self, offset: usize) -> Option<Year> {
        (offset < self.len()).then(|| Year(self.start.0 + offset as i32))
    }

    /// Position of `year` counted from the start.
    pub fn index_of(&self, year: Year) -> Option<usize> {
        self.contains(year).then(|| (year.0 - self.start.0) as usize)
    }
}

/// Which money a series is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoneyConvention {
    /// Purchasing power of the horizon start year.
    BaseYearReal,
    /// Money of the day.
    Nominal,
}

impl fmt::Display for MoneyConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoneyConvention::BaseYearReal => "base-year real",
            MoneyConvention::Nominal => "nominal",
        })
    }
}

/// `(1 + rate)^years`.
pub fn growth_factor(rate: Rate, years: u32) -> f64 {
    (1.0 + rate.0).powi(years as i32)
}

/// `(1 + rate)^-years`, the present value of one pound received `years` on.
pub fn discount_factor(rate: Rate, years: u32) -> f64 {
    1.0 / growth_factor(rate, years)
}

/// Real rate from a nominal rate and inflation, `(1+n)/(1+i) - 1`.
pub fn real_rate(nominal: Rate, inflation: Rate) -> Rate {
    Rate((1.0 + nominal.0) / (1.0 + inflation.0) - 1.0)
}

/// Inverse of [`real_rate`].
pub fn nominal_rate(real: Rate, inflation: Rate) -> Rate {
    Rate((1.0 + real.0) * (1.0 + inflation.0) - 1.0)
}

/// Constant per-annum rate taking `start` to `end` over `years`.
pub fn annualized_growth(start: Money, end: Money, years: u32) -> Result<Rate> {
    if start.0 <= 0.0 {
        return Err(Error::NonPositive {
            what: "start amount",
            value: start.0,
        });
    }
    if end.0 <= 0.0 {
        return Err(Error::NonPositive {
            what: "end amount",
            value: end.0,
        });
    }
    if years == 0 {
        return Err(Error::ZeroYears);
    }
    Ok(Rate((end.0 / start.0).powf(1.0 / years as f64) - 1.0))
}
