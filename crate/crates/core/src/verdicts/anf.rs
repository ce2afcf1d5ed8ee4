use alloc::format;
use alloc::string::ToString;

use super::{Assessment, Outcome, Property, Verdict, Witness};
use crate::error::Result;
use crate::expr::{coordinate_anfs, TExpr};

/// Criterion on the normal forms of the coordinate functions
/// `τ_i = δ_i(f(x))` for `i <= imax`.
///
/// Measure preservation needs every `τ_i = χ_i + φ_i(χ_0, …, χ_{i-1})`;
/// ergodicity additionally needs `φ_0 = 1` and every `φ_i` to contain the
/// monomial `χ_0⋯χ_{i-1}`.
pub fn check_anf_ergodic(f: &TExpr, imax: u32, cap: u32) -> Result<Assessment> {
    let anfs = coordinate_anfs(f, imax, cap)?;
    let mut mp_fail = None;
    let mut erg_fail = None;
    for (i, a) in anfs.iter().enumerate() {
        let i = i as u32;
        if !a.is_latin_in_top() {
            mp_fail.get_or_insert(Witness::Coordinate {
                index: i,
                anf: a.to_string(),
            });
        }
        let full = (1u64 << i) - 1;
        if erg_fail.is_none() && (mp_fail.is_some() || !a.lower_part().contains(full)) {
            erg_fail = Some(Witness::Coordinate {
                index: i,
                anf: a.to_string(),
            });
        }
    }
    let note = format!("coordinates 0..={imax} examined");
    let make = |p, fail: Option<Witness>, basis| {
        let holds = fail.is_none();
        let w = fail.unwrap_or_else(|| {
            Witness::Conditions(format!("all {} coordinate functions qualify", imax + 1))
        });
        Verdict::new("anf", p, Outcome::from_bool(holds), w, basis).with_note(note.clone())
    };
    Ok(Assessment {
        measure_preserving: make(
            Property::MeasurePreserving,
            mp_fail,
            "every coordinate is its top variable plus a function of lower ones",
        ),
        ergodic: make(
            Property::Ergodic,
            erg_fail,
            "lower parts of odd weight, constant one at the bottom",
        ),
    })
}
