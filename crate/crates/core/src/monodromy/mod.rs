//! Circle-map lifts, rotation numbers, fractional Dehn twist coefficients and
//! open-book classification.

mod book;
mod circle;

pub use book::{
    classify_contact, fdtc, right_veering, stabilize, BookDoc, ClassificationReport, FdtcRecord,
    HandleAttachment, MonodromyClass, MonodromyError, OpenBookDescriptor, Tightness, TwistLetter,
    Weinstein,
};
pub use circle::{
    rotation_number, Breakpoint, CircleMapLift, MapDoc, MapError, RotationNumber, RotationOptions,
};
