// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fftw3.h>

#include "error.hpp"
#include "grid.hpp"

namespace fdtdmor
{

namespace
{

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex &PlannerMutex()
{
  static std::mutex m;
  return m;
}

std::vector<std::string> SplitCsv(const std::string &line)
{
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
  {
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

std::size_t PaddedLength(std::size_t samples)
{
  std::size_t n = 1;
  while (n < 4 * samples)
  {
    n <<= 1;
  }
  return n;
}

std::vector<Complex> RealDft(const std::vector<double> &x, std::size_t length)
{
  if (length < x.size() || length == 0)
  {
    throw Error(ErrorCode::InvalidParameter, "DFT length must cover the samples");
  }
  const std::size_t bins = length / 2 + 1;
  double *in = fftw_alloc_real(length);
  fftw_complex *out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(length), in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + length, 0.0);
  std::copy(x.begin(), x.end(), in);
  fftw_execute(plan);
  std::vector<Complex> result(bins);
  for (std::size_t k = 0; k < bins; k++)
  {
    result[k] = {out[k][0], out[k][1]};
  }
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

std::vector<double> Spectrum::Magnitude(std::size_t probe) const
{
  std::vector<double> m(amplitudes.at(probe).size());
  std::transform(amplitudes[probe].begin(), amplitudes[probe].end(), m.begin(),
                 [](Complex c) { return std::abs(c); });
  return m;
}

Spectrum FrequencyResponse(const TimeSeries &series, bool pad, Window window)
{
  const std::size_t samples = series.steps();
  if (samples < 2)
  {
    throw Error(ErrorCode::InvalidParameter, "frequency response needs at least two samples");
  }
  const std::size_t length = pad ? PaddedLength(samples) : samples;
  Spectrum s;
  s.names = series.names;
  const std::size_t bins = length / 2 + 1;
  const double df = 1.0 / (static_cast<double>(length) * series.dt);
  s.frequencies.resize(bins);
  for (std::size_t k = 0; k < bins; k++)
  {
    s.frequencies[k] = static_cast<double>(k) * df;
  }
  std::vector<double> taper(samples, 1.0);
  if (window == Window::Hann)
  {
    for (std::size_t i = 0; i < samples; i++)
    {
      taper[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(samples - 1));
    }
  }
  for (const auto &v : series.values)
  {
    std::vector<double> x(v.size());
    for (std::size_t i = 0; i < v.size(); i++)
    {
      x[i] = v[i] * taper[i];
    }
    s.amplitudes.push_back(RealDft(x, length));
  }
  return s;
}

std::vector<Resonance> FindResonances(const std::vector<double> &frequencies,
                                      const std::vector<double> &magnitude, double prominence,
                                      std::size_t max_count)
{
  if (!(prominence > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "prominence must be positive");
  }
  if (frequencies.size() != magnitude.size())
  {
    throw Error(ErrorCode::InvalidParameter, "frequency and magnitude lengths differ");
  }
  std::vector<Resonance> peaks;
  const std::size_t n = magnitude.size();
  if (n < 3 || max_count == 0)
  {
    return peaks;
  }
  const double global = *std::max_element(magnitude.begin(), magnitude.end());
  if (!(global > 0.0))
  {
    return peaks;
  }
  const double threshold = prominence * global;
  const double df = frequencies[1] - frequencies[0];
  for (std::size_t i = 1; i + 1 < n && peaks.size() < max_count; i++)
  {
    const double m = magnitude[i];
    if (!(m > magnitude[i - 1] && m > magnitude[i + 1]))
    {
      continue;
    }
    // Topographic prominence: the higher of the two minima reached before climbing above m.
    double left_min = m;
    for (std::size_t j = i; j-- > 0;)
    {
      if (magnitude[j] > m)
      {
        break;
      }
      left_min = std::min(left_min, magnitude[j]);
    }
    double right_min = m;
    for (std::size_t j = i + 1; j < n; j++)
    {
      if (magnitude[j] > m)
      {
        break;
      }
      right_min = std::min(right_min, magnitude[j]);
    }
    if (m - std::max(left_min, right_min) < threshold)
    {
      continue;
    }
    const double a = magnitude[i - 1], b = m, c = magnitude[i + 1];
    const double denom = a - 2.0 * b + c;
    const double p = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    peaks.push_back({frequencies[i] + p * df, b - 0.25 * (a - c) * p});
  }
  return peaks;
}

std::vector<Resonance> FindResonances(const Spectrum &spectrum, std::size_t probe,
                                      double prominence, std::size_t max_count)
{
  return FindResonances(spectrum.frequencies, spectrum.Magnitude(probe), prominence, max_count);
}

std::vector<double> AnalyticalCavityModes(const std::vector<double> &lengths, double eps_r,
                                          std::size_t count, ModeFamily family)
{
  const std::size_t dims = family == ModeFamily::Tm2d ? 2 : 3;
  if (lengths.size() != dims)
  {
    throw Error(ErrorCode::InvalidParameter, "cavity mode family expects " +
                                                 std::to_string(dims) + " lengths");
  }
  if (count < 1 || !(eps_r > 0.0) ||
      std::any_of(lengths.begin(), lengths.end(), [](double l) { return !(l > 0.0); }))
  {
    throw Error(ErrorCode::InvalidParameter, "cavity modes need positive lengths, eps_r and count");
  }
  const double scale = constants::c0 / (2.0 * std::sqrt(eps_r));
  const double l_max = *std::max_element(lengths.begin(), lengths.end());
  for (int bound = 4;; bound *= 2)
  {
    std::vector<double> freqs;
    const int lo = family == ModeFamily::Tm2d ? 1 : 0;
    const int p_hi = dims == 3 ? bound : 0;
    for (int m = lo; m <= bound; m++)
    {
      for (int n = lo; n <= bound; n++)
      {
        for (int p = 0; p <= p_hi; p++)
        {
          if (family == ModeFamily::Cube3d && (m != 0) + (n != 0) + (p != 0) < 2)
          {
            continue;
          }
          double sum = (m / lengths[0]) * (m / lengths[0]) + (n / lengths[1]) * (n / lengths[1]);
          if (dims == 3)
          {
            sum += (p / lengths[2]) * (p / lengths[2]);
          }
          freqs.push_back(scale * std::sqrt(sum));
        }
      }
    }
    std::sort(freqs.begin(), freqs.end());
    std::vector<double> unique;
    for (double f : freqs)
    {
      if (unique.empty() || f - unique.back() > 1e-12 * f)
      {
        unique.push_back(f);
      }
    }
    // Any mode with an index above the bound lies at or above this frequency.
    const double unseen = scale * (bound + 1) / l_max;
    if (unique.size() >= count && unique[count - 1] < unseen)
    {
      unique.resize(count);
      return unique;
    }
  }
}

SParameters ExtractSParams(const std::vector<double> &incident,
                           const std::vector<double> &total_port1,
                           const std::vector<double> &transmitted_port2, double dt)
{
  if (incident.size() != total_port1.size() || incident.size() != transmitted_port2.size())
  {
    throw Error(ErrorCode::InvalidParameter, "S-parameter records must have equal lengths");
  }
  if (incident.size() < 2 || !(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "S-parameter records need two samples and dt > 0");
  }
  const std::size_t length = PaddedLength(incident.size());
  std::vector<double> reflected(incident.size());
  for (std::size_t i = 0; i < incident.size(); i++)
  {
    reflected[i] = total_port1[i] - incident[i];
  }
  const auto inc = RealDft(incident, length);
  const auto refl = RealDft(reflected, length);
  const auto trans = RealDft(transmitted_port2, length);
  SParameters s;
  const double df = 1.0 / (static_cast<double>(length) * dt);
  double peak = 0.0;
  for (const auto &c : inc)
  {
    peak = std::max(peak, std::abs(c));
  }
  if (!(peak > 0.0))
  {
    throw Error(ErrorCode::DegenerateReference, "incident spectrum is zero everywhere");
  }
  for (std::size_t k = 0; k < inc.size(); k++)
  {
    const double mag = std::abs(inc[k]);
    s.frequencies.push_back(static_cast<double>(k) * df);
    s.incident_magnitude.push_back(mag);
    const bool ok = mag >= 1e-3 * peak;
    s.valid.push_back(ok);
    s.s11.push_back(ok ? refl[k] / inc[k] : Complex(0.0));
    s.s21.push_back(ok ? trans[k] / inc[k] : Complex(0.0));
  }
  return s;
}

double MagnitudeDb(Complex v)
{
  const double m = std::abs(v);
  return m > 0.0 ? 20.0 * std::log10(m) : -400.0;
}

void WriteComplexSpectrumCsv(std::ostream &os, const std::vector<double> &frequencies,
                             const std::vector<Complex> &values,
                             const std::vector<std::string> &comments, const std::vector<bool> &mask)
{
  for (const auto &c : comments)
  {
    os << "# " << c << '\n';
  }
  os << "frequency,real,imaginary,magnitude_dB\n" << std::setprecision(17);
  for (std::size_t k = 0; k < values.size(); k++)
  {
    if (!mask.empty() && !mask[k])
    {
      continue;
    }
    os << frequencies[k] << ',' << values[k].real() << ',' << values[k].imag() << ','
       << MagnitudeDb(values[k]) << '\n';
  }
}

void WriteResonanceCsv(std::ostream &os, const std::vector<Resonance> &peaks,
                       const std::vector<std::string> &comments)
{
  for (const auto &c : comments)
  {
    os << "# " << c << '\n';
  }
  os << "index,frequency_Hz,magnitude\n" << std::setprecision(17);
  for (std::size_t i = 0; i < peaks.size(); i++)
  {
    os << i << ',' << peaks[i].frequency << ',' << peaks[i].magnitude << '\n';
  }
}

std::vector<Resonance> ReadResonanceCsv(std::istream &is)
{
  std::vector<Resonance> peaks;
  std::string line;
  bool header = false;
  while (std::getline(is, line))
  {
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    const auto cells = SplitCsv(line);
    if (!header)
    {
      if (cells.size() != 3 || cells[1] != "frequency_Hz")
      {
        throw Error(ErrorCode::Io, "resonance file header must be index,frequency_Hz,magnitude");
      }
      header = true;
      continue;
    }
    if (cells.size() != 3)
    {
      throw Error(ErrorCode::Io, "resonance row must have three columns");
    }
    peaks.push_back({std::stod(cells[1]), std::stod(cells[2])});
  }
  return peaks;
}

ComplexSpectrumTable ReadComplexSpectrumCsv(std::istream &is)
{
  ComplexSpectrumTable t;
  std::string line;
  bool header = false;
  while (std::getline(is, line))
  {
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    const auto cells = SplitCsv(line);
    if (!header)
    {
      if (cells.size() != 4 || cells[0] != "frequency")
      {
        throw Error(ErrorCode::Io, "spectrum header must be frequency,real,imaginary,magnitude_dB");
      }
      header = true;
      continue;
    }
    if (cells.size() != 4)
    {
      throw Error(ErrorCode::Io, "spectrum row must have four columns");
    }
    t.frequencies.push_back(std::stod(cells[0]));
    t.values.emplace_back(std::stod(cells[1]), std::stod(cells[2]));
  }
  return t;
}

}  // namespace fdtdmor
