//! C interface to `coalloc`.
//!
//! Objects are opaque heap handles released with the matching `_free`
//! function. Every fallible call returns a [`CoallocStatus`]; on failure
//! [`coalloc_last_error`] describes the problem for the calling thread.
//! Permutations cross the boundary 1-based, as in the text formats.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coalloc::{
    apply_allocation, check_abs_sums, check_efficiency, check_reasonable_structural, check_row_sums_zero,
    peel_decompose, random_allocation, shapley_matrix, shapley_value, special_allocation,
    verify_decomposition, AllocationMatrix, CheckReport, Decomposition, Game, SetChain,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoallocStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    DecompositionFailed = 4,
    Panic = 5,
}

/// A game: `2^n` coalition values in bitmask order.
pub struct CoallocGame(Game);

/// An `n × 2^n` allocation matrix.
pub struct CoallocAllocation(AllocationMatrix);

/// Weighted permutations whose special allocations sum to a matrix.
pub struct CoallocDecomposition(Decomposition);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("interior NULs removed"));
}

struct Failure(CoallocStatus, String);

fn invalid(e: impl ToString) -> Failure {
    Failure(CoallocStatus::InvalidArgument, e.to_string())
}

fn null(what: &str) -> Failure {
    Failure(CoallocStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CoallocStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CoallocStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {message}"));
            CoallocStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn fill(out: *mut f64, len: usize, values: &[f64]) -> Result<(), Failure> {
    if len < values.len() {
        return Err(Failure(
            CoallocStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    if out.is_null() {
        return Err(null("output buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the most recent failed call on this thread; empty after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn coalloc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a game from `len = 2^n` values in bitmask order.
#[no_mangle]
pub unsafe extern "C" fn coalloc_game_new(
    n: usize,
    values: *const f64,
    len: usize,
    out: *mut *mut CoallocGame,
) -> CoallocStatus {
    guard(|| {
        let values = slice(values, len, "values")?.to_vec();
        let g = Game::new(n, values).map_err(invalid)?;
        write_out(out, boxed(CoallocGame(g)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_game_free(game: *mut CoallocGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_game_is_monotone(game: *const CoallocGame, out: *mut bool) -> CoallocStatus {
    guard(|| write_out(out, get(game, "game")?.0.is_monotone(), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_game_is_superadditive(
    game: *const CoallocGame,
    out: *mut bool,
) -> CoallocStatus {
    guard(|| write_out(out, get(game, "game")?.0.is_superadditive(), "out"))
}

/// Writes the `n` Shapley payoffs into `out`.
#[no_mangle]
pub unsafe extern "C" fn coalloc_shapley_value(
    game: *const CoallocGame,
    out: *mut f64,
    len: usize,
) -> CoallocStatus {
    guard(|| {
        let phi = shapley_value(&get(game, "game")?.0).map_err(invalid)?;
        fill(out, len, &phi.0)
    })
}

/// Creates an allocation from `len = n·2^n` entries, row-major.
#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_new(
    n: usize,
    entries: *const f64,
    len: usize,
    out: *mut *mut CoallocAllocation,
) -> CoallocStatus {
    guard(|| {
        let entries = slice(entries, len, "entries")?;
        if n == 0 || !len.is_multiple_of(n) {
            return Err(invalid(format!("{len} entries do not form {n} rows")));
        }
        let rows = entries.chunks(len / n).map(<[f64]>::to_vec).collect();
        let a = AllocationMatrix::from_rows(n, rows).map_err(invalid)?;
        write_out(out, boxed(CoallocAllocation(a)), "out")
    })
}

/// Special allocation of a permutation of `1..=len`.
#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_special(
    perm: *const usize,
    len: usize,
    out: *mut *mut CoallocAllocation,
) -> CoallocStatus {
    guard(|| {
        let perm = slice(perm, len, "perm")?;
        if perm.contains(&0) {
            return Err(invalid("permutation entries start at 1"));
        }
        let chain = SetChain::new(perm.iter().map(|p| p - 1).collect()).map_err(invalid)?;
        write_out(out, boxed(CoallocAllocation(special_allocation(&chain))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_shapley(
    n: usize,
    out: *mut *mut CoallocAllocation,
) -> CoallocStatus {
    guard(|| {
        let a = shapley_matrix(n).map_err(invalid)?;
        write_out(out, boxed(CoallocAllocation(a)), "out")
    })
}

/// A seeded random point of the polytope together with its certificate.
#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_random(
    n: usize,
    support: usize,
    seed: u64,
    out: *mut *mut CoallocAllocation,
    cert: *mut *mut CoallocDecomposition,
) -> CoallocStatus {
    guard(|| {
        if out.is_null() || cert.is_null() {
            return Err(null("out"));
        }
        let (a, d) = random_allocation(n, support, seed).map_err(invalid)?;
        write_out(out, boxed(CoallocAllocation(a)), "out")?;
        write_out(cert, boxed(CoallocDecomposition(d)), "cert")
    })
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_free(allocation: *mut CoallocAllocation) {
    if !allocation.is_null() {
        drop(Box::from_raw(allocation));
    }
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_players(
    allocation: *const CoallocAllocation,
    out: *mut usize,
) -> CoallocStatus {
    guard(|| write_out(out, get(allocation, "allocation")?.0.n(), "out"))
}

/// Copies the `n·2^n` entries, row-major, into `out`.
#[no_mangle]
pub unsafe extern "C" fn coalloc_allocation_entries(
    allocation: *const CoallocAllocation,
    out: *mut f64,
    len: usize,
) -> CoallocStatus {
    guard(|| fill(out, len, get(allocation, "allocation")?.0.entries()))
}

/// Writes the `n` payoffs of `allocation` on `game` into `out`.
#[no_mangle]
pub unsafe extern "C" fn coalloc_apply(
    allocation: *const CoallocAllocation,
    game: *const CoallocGame,
    out: *mut f64,
    len: usize,
) -> CoallocStatus {
    guard(|| {
        let phi =
            apply_allocation(&get(allocation, "allocation")?.0, &get(game, "game")?.0).map_err(invalid)?;
        fill(out, len, &phi.0)
    })
}

unsafe fn count_violations(
    allocation: *const CoallocAllocation,
    tol: f64,
    violations: *mut usize,
    check: fn(&AllocationMatrix, f64) -> CheckReport,
) -> CoallocStatus {
    guard(|| {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(invalid("tolerance must be a nonnegative number"));
        }
        let report = check(&get(allocation, "allocation")?.0, tol);
        write_out(violations, report.violations.len(), "violations")
    })
}

/// Number of column sums off `(−1, 0, …, 0, 1)`; zero means efficient.
#[no_mangle]
pub unsafe extern "C" fn coalloc_check_efficiency(
    allocation: *const CoallocAllocation,
    tol: f64,
    violations: *mut usize,
) -> CoallocStatus {
    count_violations(allocation, tol, violations, check_efficiency)
}

/// Number of failed sign, pairing and partial-row-sum conditions.
#[no_mangle]
pub unsafe extern "C" fn coalloc_check_reasonable_structural(
    allocation: *const CoallocAllocation,
    tol: f64,
    violations: *mut usize,
) -> CoallocStatus {
    count_violations(allocation, tol, violations, check_reasonable_structural)
}

/// Number of rows and interior columns whose absolute sum is not 2.
#[no_mangle]
pub unsafe extern "C" fn coalloc_check_abs_sums(
    allocation: *const CoallocAllocation,
    tol: f64,
    violations: *mut usize,
) -> CoallocStatus {
    count_violations(allocation, tol, violations, check_abs_sums)
}

/// Number of rows that do not sum to zero.
#[no_mangle]
pub unsafe extern "C" fn coalloc_check_row_sums_zero(
    allocation: *const CoallocAllocation,
    tol: f64,
    violations: *mut usize,
) -> CoallocStatus {
    count_violations(allocation, tol, violations, check_row_sums_zero)
}

/// Chain peeling. Fails with `DECOMPOSITION_FAILED` when the matrix is not
/// reasonable and efficient at `tol`.
#[no_mangle]
pub unsafe extern "C" fn coalloc_peel_decompose(
    allocation: *const CoallocAllocation,
    tol: f64,
    out: *mut *mut CoallocDecomposition,
) -> CoallocStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (d, _) = peel_decompose(&get(allocation, "allocation")?.0, tol)
            .map_err(|e| Failure(CoallocStatus::DecompositionFailed, e.to_string()))?;
        write_out(out, boxed(CoallocDecomposition(d)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_decomposition_free(decomposition: *mut CoallocDecomposition) {
    if !decomposition.is_null() {
        drop(Box::from_raw(decomposition));
    }
}

#[no_mangle]
pub unsafe extern "C" fn coalloc_decomposition_len(
    decomposition: *const CoallocDecomposition,
    out: *mut usize,
) -> CoallocStatus {
    guard(|| write_out(out, get(decomposition, "decomposition")?.0.terms.len(), "out"))
}

/// Term `index`: its 1-based permutation (`perm_len >= n`) and weight.
#[no_mangle]
pub unsafe extern "C" fn coalloc_decomposition_term(
    decomposition: *const CoallocDecomposition,
    index: usize,
    perm: *mut usize,
    perm_len: usize,
    weight: *mut f64,
) -> CoallocStatus {
    guard(|| {
        let d = &get(decomposition, "decomposition")?.0;
        let term = d.terms.get(index).ok_or_else(|| invalid(format!("term {index} of {}", d.terms.len())))?;
        let order = term.chain.one_based();
        if perm_len < order.len() {
            return Err(Failure(
                CoallocStatus::BufferTooSmall,
                format!("permutation needs {} slots", order.len()),
            ));
        }
        if perm.is_null() {
            return Err(null("perm"));
        }
        ptr::copy_nonoverlapping(order.as_ptr(), perm, order.len());
        write_out(weight, term.weight, "weight")
    })
}

/// Number of failed certificate conditions; zero means `decomposition`
/// reconstructs `allocation` within `tol`.
#[no_mangle]
pub unsafe extern "C" fn coalloc_verify_decomposition(
    allocation: *const CoallocAllocation,
    decomposition: *const CoallocDecomposition,
    tol: f64,
    violations: *mut usize,
) -> CoallocStatus {
    guard(|| {
        let report = verify_decomposition(
            &get(allocation, "allocation")?.0,
            &get(decomposition, "decomposition")?.0,
            tol,
        );
        write_out(violations, report.violations.len(), "violations")
    })
}
