//! Fractional Dehn twist coefficients, open books, and their contact classification.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::circle::{rotation_number, CircleMapLift, RotationNumber, RotationOptions};
use crate::rational::{self, format_rational, Rational};
use crate::surface::SurfaceSignature;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MonodromyError {
    #[error("prong count must be at least 1")]
    ZeroProngs,
    #[error("boundary {boundary}: k/n = {from_prongs} but the supplied lift has rotation number {from_lift}")]
    Inconsistent {
        boundary: usize,
        from_prongs: String,
        from_lift: String,
    },
    #[error("{class} monodromy has no classification")]
    UnsupportedClass { class: &'static str },
    #[error("periodic order must be at least 1")]
    ZeroOrder,
    #[error("{records} coefficient records for {boundary} boundary components")]
    CoefficientCount { records: usize, boundary: u32 },
    #[error("boundary component {0} has more than one coefficient record")]
    DuplicateBoundary(usize),
    #[error("boundary index {index} out of range for {boundary} boundary components")]
    BoundaryOutOfRange { index: usize, boundary: u32 },
    #[error("pseudo-Anosov coefficient on boundary {0} has no prong data")]
    MissingProngs(usize),
    #[error("handle attachment needs two distinct boundary components")]
    SameEndpoints,
}

/// Coefficient `c` on one boundary component. For pseudo-Anosov data the
/// prong count `n` and shift `k` are kept and `c = k/n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdtcRecord {
    pub boundary_index: usize,
    #[serde(with = "rational::serde_str")]
    pub coefficient: Rational,
    pub prongs: Option<u32>,
    pub shift: Option<i64>,
}

impl FdtcRecord {
    /// `c mod 1`, which must equal `(k mod n)/n`.
    pub fn fractional_part(&self) -> Rational {
        &self.coefficient - Rational::from_integer(rational::floor(&self.coefficient))
    }
}

pub fn fdtc(
    boundary_index: usize,
    prongs: u32,
    shift: i64,
    lift: Option<&CircleMapLift>,
    opts: RotationOptions,
) -> Result<FdtcRecord, MonodromyError> {
    if prongs == 0 {
        return Err(MonodromyError::ZeroProngs);
    }
    let c = Rational::new(BigInt::from(shift), BigInt::from(prongs));
    if let Some(f) = lift {
        let rho = rotation_number(f, opts);
        if rho.exact() != Some(&c) {
            let from_lift = match &rho {
                RotationNumber::Exact { value, .. } => format_rational(value),
                RotationNumber::Interval { lo, hi, .. } => {
                    format!("in [{}, {}]", format_rational(lo), format_rational(hi))
                }
            };
            return Err(MonodromyError::Inconsistent {
                boundary: boundary_index,
                from_prongs: format_rational(&c),
                from_lift,
            });
        }
    }
    Ok(FdtcRecord {
        boundary_index,
        coefficient: c,
        prongs: Some(prongs),
        shift: Some(shift),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLetter {
    pub symbol: String,
    #[serde(rename = "exp")]
    pub exponent: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonodromyClass {
    Identity,
    Periodic {
        order: u32,
        coefficients: Vec<FdtcRecord>,
    },
    PseudoAnosov {
        coefficients: Vec<FdtcRecord>,
    },
    Reducible,
    /// Result of a stabilization; the free-homotopy type is no longer known.
    Unclassified,
}

impl MonodromyClass {
    pub fn name(&self) -> &'static str {
        match self {
            MonodromyClass::Identity => "identity",
            MonodromyClass::Periodic { .. } => "periodic",
            MonodromyClass::PseudoAnosov { .. } => "pA",
            MonodromyClass::Reducible => "reducible",
            MonodromyClass::Unclassified => "unclassified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffDoc {
    n: u32,
    k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
enum ClassDoc {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "periodic")]
    Periodic {
        order: u32,
        #[serde(default)]
        coeffs: Vec<CoeffDoc>,
    },
    #[serde(rename = "pA")]
    PseudoAnosov { coeffs: Vec<CoeffDoc> },
    #[serde(rename = "reducible")]
    Reducible,
    #[serde(rename = "unclassified")]
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BookDoc {
    genus: u32,
    boundary: u32,
    #[serde(default)]
    word: Vec<TwistLetter>,
    class: ClassDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BookDoc", into = "BookDoc")]
pub struct OpenBookDescriptor {
    pub page: SurfaceSignature,
    pub word: Vec<TwistLetter>,
    pub class: MonodromyClass,
}

fn records(coeffs: Vec<CoeffDoc>) -> Result<Vec<FdtcRecord>, MonodromyError> {
    coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            fdtc(
                c.boundary.unwrap_or(i),
                c.n,
                c.k,
                None,
                RotationOptions::default(),
            )
        })
        .collect()
}

fn coeff_docs(records: Vec<FdtcRecord>) -> Vec<CoeffDoc> {
    records
        .into_iter()
        .map(|r| CoeffDoc {
            n: r.prongs.unwrap_or(1),
            k: r.shift.unwrap_or(0),
            boundary: Some(r.boundary_index),
        })
        .collect()
}

impl TryFrom<BookDoc> for OpenBookDescriptor {
    type Error = MonodromyError;

    fn try_from(doc: BookDoc) -> Result<Self, MonodromyError> {
        let class = match doc.class {
            ClassDoc::Identity => MonodromyClass::Identity,
            ClassDoc::Periodic { order, coeffs } => MonodromyClass::Periodic {
                order,
                coefficients: records(coeffs)?,
            },
            ClassDoc::PseudoAnosov { coeffs } => MonodromyClass::PseudoAnosov {
                coefficients: records(coeffs)?,
            },
            ClassDoc::Reducible => MonodromyClass::Reducible,
            ClassDoc::Unclassified => MonodromyClass::Unclassified,
        };
        let book = OpenBookDescriptor {
            page: SurfaceSignature {
                genus: doc.genus,
                boundary_components: doc.boundary,
            },
            word: doc.word,
            class,
        };
        book.validate()?;
        Ok(book)
    }
}

impl From<OpenBookDescriptor> for BookDoc {
    fn from(b: OpenBookDescriptor) -> Self {
        let class = match b.class {
            MonodromyClass::Identity => ClassDoc::Identity,
            MonodromyClass::Periodic {
                order,
                coefficients,
            } => ClassDoc::Periodic {
                order,
                coeffs: coeff_docs(coefficients),
            },
            MonodromyClass::PseudoAnosov { coefficients } => ClassDoc::PseudoAnosov {
                coeffs: coeff_docs(coefficients),
            },
            MonodromyClass::Reducible => ClassDoc::Reducible,
            MonodromyClass::Unclassified => ClassDoc::Unclassified,
        };
        BookDoc {
            genus: b.page.genus,
            boundary: b.page.boundary_components,
            word: b.word,
            class,
        }
    }
}

fn check_cover(coefficients: &[FdtcRecord], boundary: u32) -> Result<(), MonodromyError> {
    if coefficients.len() != boundary as usize {
        return Err(MonodromyError::CoefficientCount {
            records: coefficients.len(),
            boundary,
        });
    }
    let mut seen = vec![false; boundary as usize];
    for r in coefficients {
        let slot = seen
            .get_mut(r.boundary_index)
            .ok_or(MonodromyError::BoundaryOutOfRange {
                index: r.boundary_index,
                boundary,
            })?;
        if *slot {
            return Err(MonodromyError::DuplicateBoundary(r.boundary_index));
        }
        *slot = true;
    }
    Ok(())
}

impl OpenBookDescriptor {
    pub fn validate(&self) -> Result<(), MonodromyError> {
        let boundary = self.page.boundary_components;
        match &self.class {
            MonodromyClass::Periodic {
                order,
                coefficients,
            } => {
                if *order == 0 {
                    return Err(MonodromyError::ZeroOrder);
                }
                check_cover(coefficients, boundary)
            }
            MonodromyClass::PseudoAnosov { coefficients } => check_cover(coefficients, boundary),
            _ => Ok(()),
        }
    }

    /// Coefficients for classification; the identity has `c = 0` everywhere.
    fn coefficients(&self) -> Result<(bool, Vec<FdtcRecord>), MonodromyError> {
        match &self.class {
            MonodromyClass::Identity => Ok((
                true,
                (0..self.page.boundary_components as usize)
                    .map(|i| FdtcRecord {
                        boundary_index: i,
                        coefficient: Rational::zero(),
                        prongs: None,
                        shift: None,
                    })
                    .collect(),
            )),
            MonodromyClass::Periodic { coefficients, .. } => Ok((true, coefficients.clone())),
            MonodromyClass::PseudoAnosov { coefficients } => Ok((false, coefficients.clone())),
            other => Err(MonodromyError::UnsupportedClass {
                class: other.name(),
            }),
        }
    }
}

/// Periodic: all `c >= 0`. Pseudo-Anosov: all `c > 0`.
pub fn right_veering(book: &OpenBookDescriptor) -> Result<bool, MonodromyError> {
    let (periodic, coeffs) = book.coefficients()?;
    Ok(coeffs.iter().all(|r| {
        if periodic {
            !r.coefficient.is_negative()
        } else {
            r.coefficient.is_positive()
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tightness {
    Overtwisted,
    Tight,
    UniversallyTight,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weinstein {
    Holds,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub tightness: Tightness,
    /// `None` when unknown.
    pub stein_fillable: Option<bool>,
    pub weinstein: Weinstein,
    pub right_veering: bool,
}

pub fn classify_contact(book: &OpenBookDescriptor) -> Result<ClassificationReport, MonodromyError> {
    let (periodic, coeffs) = book.coefficients()?;
    let right_veering = right_veering(book)?;
    let overtwisted = ClassificationReport {
        tightness: Tightness::Overtwisted,
        stein_fillable: Some(false),
        weinstein: Weinstein::Holds,
        right_veering,
    };
    if periodic {
        if !right_veering {
            return Ok(overtwisted);
        }
        return Ok(ClassificationReport {
            tightness: Tightness::Tight,
            stein_fillable: Some(true),
            weinstein: Weinstein::Holds,
            right_veering,
        });
    }
    if coeffs.iter().any(|r| !r.coefficient.is_positive()) {
        return Ok(overtwisted);
    }
    if coeffs.len() != 1 {
        return Ok(ClassificationReport {
            tightness: Tightness::Undetermined,
            stein_fillable: None,
            weinstein: Weinstein::Open,
            right_veering,
        });
    }
    let r = &coeffs[0];
    let n = match (r.prongs, r.shift) {
        (Some(n), Some(_)) => n,
        _ => return Err(MonodromyError::MissingProngs(r.boundary_index)),
    };
    // k = c*n, compared against 1 and 3 for the tightness and Weinstein thresholds
    let scaled = &r.coefficient * Rational::from_integer(BigInt::from(n));
    let tightness = if scaled > Rational::from_integer(1.into()) {
        Tightness::UniversallyTight
    } else {
        Tightness::Undetermined
    };
    let weinstein = if scaled >= Rational::from_integer(3.into()) {
        Weinstein::Holds
    } else {
        Weinstein::Open
    };
    Ok(ClassificationReport {
        tightness,
        stein_fillable: None,
        weinstein,
        right_veering,
    })
}

/// Where the 1-handle of a stabilization is attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HandleAttachment {
    /// Both feet on one boundary component: splits it in two.
    SameComponent(u32),
    /// Feet on two components: merges them and adds a genus.
    Connecting(u32, u32),
}

pub fn stabilize(
    book: &OpenBookDescriptor,
    positive: bool,
    handle: HandleAttachment,
) -> Result<OpenBookDescriptor, MonodromyError> {
    let SurfaceSignature {
        genus,
        boundary_components: b,
    } = book.page;
    let check = |i: u32| {
        if i < b {
            Ok(())
        } else {
            Err(MonodromyError::BoundaryOutOfRange {
                index: i as usize,
                boundary: b,
            })
        }
    };
    let page = match handle {
        HandleAttachment::SameComponent(i) => {
            check(i)?;
            SurfaceSignature {
                genus,
                boundary_components: b + 1,
            }
        }
        HandleAttachment::Connecting(i, j) => {
            check(i)?;
            check(j)?;
            if i == j {
                return Err(MonodromyError::SameEndpoints);
            }
            SurfaceSignature {
                genus: genus + 1,
                boundary_components: b - 1,
            }
        }
    };
    let mut fresh = book.word.len();
    let symbol = loop {
        let s = format!("R{fresh}");
        if book.word.iter().all(|l| l.symbol != s) {
            break s;
        }
        fresh += 1;
    };
    let mut word = Vec::with_capacity(book.word.len() + 1);
    word.push(TwistLetter {
        symbol,
        exponent: if positive { 1 } else { -1 },
    });
    word.extend(book.word.iter().cloned());
    Ok(OpenBookDescriptor {
        page,
        word,
        class: MonodromyClass::Unclassified,
    })
}
