// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_POSTPROCESS_HPP
#define FDTDMOR_CORE_POSTPROCESS_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "full_fdtd.hpp"

namespace fdtdmor
{

using Complex = std::complex<double>;

// Next power of two >= 4 * samples.
std::size_t PaddedLength(std::size_t samples);

// One-sided DFT (bins 0..length/2) of x zero-padded to `length`, rectangular window.
std::vector<Complex> RealDft(const std::vector<double> &x, std::size_t length);

struct Spectrum
{
  std::vector<double> frequencies;  // uniform, 0 .. 1/(2 dt)
  std::vector<std::string> names;
  std::vector<std::vector<Complex>> amplitudes;  // per probe

  double bin_width() const { return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0; }
  std::vector<double> Magnitude(std::size_t probe) const;
};

enum class Window
{
  Rectangular,
  Hann,
};

// pad = false keeps the transform length equal to the sample count. Hann tapering is
// used for peak picking on undamped records, where rectangular sidelobes would pass as
// resonances.
Spectrum FrequencyResponse(const TimeSeries &series, bool pad = true,
                           Window window = Window::Rectangular);

struct Resonance
{
  double frequency = 0.0;
  double magnitude = 0.0;
};

inline constexpr double kDefaultProminence = 0.05;

// Strict local maxima whose topographic prominence is at least prominence * global max,
// refined by a parabola through three bins. Lowest frequencies first, at most max_count.
std::vector<Resonance> FindResonances(const std::vector<double> &frequencies,
                                      const std::vector<double> &magnitude, double prominence,
                                      std::size_t max_count);
std::vector<Resonance> FindResonances(const Spectrum &spectrum, std::size_t probe,
                                      double prominence, std::size_t max_count);

enum class ModeFamily
{
  Tm2d,    // lengths (lx, ly); m, n >= 1
  Cube3d,  // lengths (lx, ly, lz); at least two indices nonzero
};

// Sorted, deduplicated resonant frequencies of a rectangular PEC cavity.
std::vector<double> AnalyticalCavityModes(const std::vector<double> &lengths, double eps_r,
                                          std::size_t count, ModeFamily family);

struct SParameters
{
  std::vector<double> frequencies;
  std::vector<Complex> s11, s21;
  std::vector<double> incident_magnitude;
  std::vector<bool> valid;  // |DFT(incident)| >= 1e-3 of its maximum
};

// S11 = DFT(total - incident) / DFT(incident), S21 = DFT(transmitted) / DFT(incident).
SParameters ExtractSParams(const std::vector<double> &incident,
                           const std::vector<double> &total_port1,
                           const std::vector<double> &transmitted_port2, double dt);

double MagnitudeDb(Complex v);

// "frequency,real,imaginary,magnitude_dB"; rows where mask is false are skipped.
void WriteComplexSpectrumCsv(std::ostream &os, const std::vector<double> &frequencies,
                             const std::vector<Complex> &values,
                             const std::vector<std::string> &comments = {},
                             const std::vector<bool> &mask = {});
// "index,frequency_Hz,magnitude".
void WriteResonanceCsv(std::ostream &os, const std::vector<Resonance> &peaks,
                       const std::vector<std::string> &comments = {});
std::vector<Resonance> ReadResonanceCsv(std::istream &is);

struct ComplexSpectrumTable
{
  std::vector<double> frequencies;
  std::vector<Complex> values;
};
ComplexSpectrumTable ReadComplexSpectrumCsv(std::istream &is);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_POSTPROCESS_HPP
