#pragma once

#include <array>

#include "bsync/waveform.hpp"

// Cubic-Lagrange fractional-delay interpolation in Farrow form: fixed
// coefficient combinations of the four window samples, powers of mu applied
// outermost (Horner evaluation).

namespace bsync {

// Four consecutive samples r[-1], r0, r1, r2 at unit spacing. The output is
// the unique cubic through them evaluated mu forward of r1, i.e. inside the
// interval [r1, r2).
struct InterpWindow {
    std::array<cplx, 4> r{};
    double mu = 0.0;  // in [0, 1)
};

cplx interpolate(const InterpWindow& window);

// Value of `samples` at fractional index `position` using the same kernel.
// Positions outside [2, size-2] are clamped to the nearest valid point;
// *edge is set when that happens.
cplx interpolate_at(const std::vector<cplx>& samples, double position, bool* edge = nullptr);

// Delays the underlying signal by shift_seconds: output m is the input
// evaluated at index m - shift/Ts. Length preserved; edge samples are filled
// from the nearest valid window and counted in edge_filled. Shifts of any
// size fold into integer sample moves plus a fractional residue.
ReceiverSamples fractional_delay(const ReceiverSamples& stream, double shift_seconds);

} // namespace bsync
