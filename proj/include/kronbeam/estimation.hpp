// SPDX-License-Identifier: Apache-2.0
//
// kronbeam - Kronecker-factor analog beamforming and two-stage channel
// estimation for large uniform linear arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <vector>

#include "analog_design.hpp"
#include "array_channel.hpp"
#include "hadamard.hpp"
#include "rng.hpp"

namespace kronbeam
{

// Training sequences for one frame: K mutually orthogonal +-1 rows for the
// in-cell users, M i.i.d. +-1 rows for the out-of-cell interferers.
struct PilotBook
{
    rmat intended;    // K x Z, rows exactly orthogonal
    rmat interfering; // M x Z, Rademacher
};

// Orthogonal pilot assignment: the K intended sequences are distinct rows of
// a Hadamard matrix of order Z; interfering sequences are fair coin flips.
// A single user accepts any Z >= 1 (the all-ones row needs no orthogonal
// partner); otherwise Z must be 1, 2, or a constructible multiple of 4.
inline PilotBook make_pilots(int users, int pilotLength, RngStream stream, int interferers = 0)
{
    if (users < 1 || pilotLength < 1)
        throw std::invalid_argument("make_pilots: users and pilotLength must be >= 1");
    if (users > pilotLength)
        throw std::invalid_argument("make_pilots: more users than pilot symbols (" +
                                    std::to_string(users) + " > " + std::to_string(pilotLength) +
                                    "); orthogonality impossible");
    if (interferers < 0)
        throw std::invalid_argument("make_pilots: interferers must be >= 0");

    PilotBook book;
    if (users == 1)
        book.intended = rmat::Ones(1, pilotLength);
    else
        book.intended = hadamard_matrix(pilotLength).topRows(users);

    book.interfering.resize(interferers, pilotLength);
    for (int m = 0; m < interferers; ++m)
        for (int t = 0; t < pilotLength; ++t)
            book.interfering(m, t) = stream.rademacher();
    return book;
}

// Correlate the training block against one pilot sequence: Y * pilot / sqrt(Z).
// For user k's pilot this yields sqrt(Z) g_k plus interference terms with
// zero-mean unit-variance pilot cross-correlations and noise of per-entry
// variance N0 — i.e. despreading buys an interference/noise suppression
// factor sqrt(Z) relative to the coherent part.
inline cvec despread(const cmat& y, const rvec& pilot)
{
    if (y.cols() != pilot.size())
        throw std::invalid_argument("despread: pilot length must match observation columns");
    return (y * pilot.cast<cplx>()) / std::sqrt(static_cast<double>(pilot.size()));
}

// Beam-scan spectrum F(Omega) = |v(Omega)^H y| / N over a uniform angle grid.
struct AoaSpectrum
{
    int samples = 0;       // grid size N_sam
    double resolution = 0; // grid step 2*pi/N_sam
    rvec values;           // F at each grid angle

    double angle(int i) const { return i * resolution; }
};

// Evaluate the scan over `samples` grid points (at least 2N, so the grid is
// finer than half the main-lobe width). Each grid point is one projection of
// the observation onto a steering vector; the scan phasor is advanced
// multiplicatively and re-synchronized periodically to hold rounding near
// machine precision.
inline AoaSpectrum aoa_spectrum(const cvec& observation, int samples)
{
    const int n = static_cast<int>(observation.size());
    if (n < 2)
        throw std::invalid_argument("aoa_spectrum: observation must have >= 2 entries");
    if (samples < 2 * n)
        throw std::invalid_argument("aoa_spectrum: grid must have at least 2N points");

    AoaSpectrum spec;
    spec.samples = samples;
    spec.resolution = two_pi / samples;
    spec.values.resize(samples);
    for (int i = 0; i < samples; ++i)
    {
        const double omega = spec.resolution * i;
        const cplx step = std::polar(1.0, -omega);
        cplx phasor(1.0, 0.0);
        cplx acc(0.0, 0.0);
        for (int t = 0; t < n; ++t)
        {
            if (t % 64 == 0)
                phasor = std::polar(1.0, canonical_angle(-omega * t));
            acc += phasor * observation[t];
            phasor *= step;
        }
        spec.values[i] = std::abs(acc) / n;
    }
    return spec;
}

// Single projection |v(omega)^H y| / N; the continuous-angle version of one
// spectrum sample.
inline double spectrum_at(const cvec& observation, double omega)
{
    const int n = static_cast<int>(observation.size());
    cplx acc(0.0, 0.0);
    for (int t = 0; t < n; ++t)
        acc += std::polar(1.0, canonical_angle(-omega * t)) * observation[t];
    return std::abs(acc) / n;
}

// Detected spectrum peak. `strong` marks data-path candidates; weak peaks
// are interference candidates.
struct SpectrumPeak
{
    double angle = 0;
    double magnitude = 0;
    bool strong = false;
};

enum class PeakMode
{
    Count,    // top-`strongCount` magnitudes strong, next `weakCount` weak
    Threshold // strong >= thetaS; weak in [thetaW, thetaS)
};

struct PeakDetectParams
{
    int strongCount = 0;
    int weakCount = 0;
    double strongThreshold = -1.0; // Threshold mode; < 0 = 0.5 * max value
    double weakThreshold = -1.0;   // Threshold mode; < 0 = 4 * robust sigma
    // Side-lobe suppression: discard a candidate within `lobeRadius` radians
    // of a stronger accepted peak unless it reaches `lobeRatio` of that
    // peak's magnitude. radius 0 disables.
    double lobeRadius = 0.0;
    double lobeRatio = 0.25;
};

// Local maxima of the sampled spectrum, refined by three-point parabolic
// interpolation and classified strong/weak. Candidates are processed in
// descending magnitude; the returned list keeps that order (strong first).
inline std::vector<SpectrumPeak> detect_peaks(const AoaSpectrum& spectrum, PeakMode mode,
                                              const PeakDetectParams& params = {})
{
    const int n = spectrum.samples;
    if (n == 0 || spectrum.values.size() != n)
        throw std::invalid_argument("detect_peaks: empty spectrum");

    std::vector<SpectrumPeak> cands;
    for (int i = 0; i < n; ++i)
    {
        double prev = spectrum.values[(i + n - 1) % n];
        double cur = spectrum.values[i];
        double next = spectrum.values[(i + 1) % n];
        if (!(cur >= prev && cur > next))
            continue;

        // Parabola through the three samples around the maximum.
        double denom = prev - 2.0 * cur + next;
        double delta = 0.0;
        if (std::fabs(denom) > 1e-300)
            delta = 0.5 * (prev - next) / denom;
        delta = std::clamp(delta, -0.5, 0.5);

        SpectrumPeak p;
        p.angle = canonical_angle(spectrum.angle(i) + delta * spectrum.resolution);
        p.magnitude = cur - 0.25 * (prev - next) * delta;
        cands.push_back(p);
    }

    std::sort(cands.begin(), cands.end(), [](const SpectrumPeak& a, const SpectrumPeak& b) {
        return a.magnitude != b.magnitude ? a.magnitude > b.magnitude : a.angle < b.angle;
    });

    if (params.lobeRadius > 0.0)
    {
        std::vector<SpectrumPeak> kept;
        for (const SpectrumPeak& c : cands)
        {
            bool lobe = false;
            for (const SpectrumPeak& p : kept)
                if (circular_distance(c.angle, p.angle) <= params.lobeRadius &&
                    c.magnitude <= params.lobeRatio * p.magnitude)
                {
                    lobe = true;
                    break;
                }
            if (!lobe)
                kept.push_back(c);
        }
        cands.swap(kept);
    }

    std::vector<SpectrumPeak> out;
    if (mode == PeakMode::Count)
    {
        for (std::size_t i = 0; i < cands.size(); ++i)
        {
            if (static_cast<int>(i) >= params.strongCount + params.weakCount)
                break;
            SpectrumPeak p = cands[i];
            p.strong = static_cast<int>(i) < params.strongCount;
            out.push_back(p);
        }
    }
    else
    {
        double maxVal = spectrum.values.maxCoeff();
        double thetaS = params.strongThreshold >= 0.0 ? params.strongThreshold : 0.5 * maxVal;

        double thetaW = params.weakThreshold;
        if (thetaW < 0.0)
        {
            rvec sorted = spectrum.values;
            std::sort(sorted.data(), sorted.data() + sorted.size());
            double median = 0.5 * (sorted[(n - 1) / 2] + sorted[n / 2]);
            thetaW = 4.0 * 1.4826 * median; // robust noise-floor scale
        }

        for (const SpectrumPeak& c : cands)
        {
            if (c.magnitude >= thetaS)
            {
                SpectrumPeak p = c;
                p.strong = true;
                out.push_back(p);
            }
            else if (c.magnitude >= thetaW)
            {
                SpectrumPeak p = c;
                p.strong = false;
                out.push_back(p);
            }
        }
    }
    return out;
}

// One estimated propagation path. Data paths carry a complex gain estimate
// and their owner user; interference paths are angle-only.
struct PathEstimate
{
    PhaseAngle angle;
    cplx gain{0.0, 0.0};
    bool hasGain = false;
    bool strong = false;
    int owner = -1;
};

// Interference angles by decision feedback: each user's estimated data paths
// are synthesized back at despread scale (sqrt(Z) a v(Phi)) and subtracted
// from that user's despread vector; the K residual spectra are averaged and
// weak-peak detection runs on the average. Averaging decorrelates the
// per-user pilot cross-correlation fades, so an interferer that is faint in
// one user's residual is still visible in the mean.
inline std::vector<PhaseAngle> decision_feedback_interference_aoa(
    const std::vector<cvec>& despreads, const std::vector<std::vector<PathEstimate>>& dataEstimates,
    int pilotLength, PeakMode mode, const PeakDetectParams& params, int samples = 0)
{
    if (despreads.empty())
        throw std::invalid_argument("decision_feedback_interference_aoa: no despread vectors");
    if (dataEstimates.size() != despreads.size())
        throw std::invalid_argument(
            "decision_feedback_interference_aoa: one estimate list per despread vector required");

    const int n = static_cast<int>(despreads.front().size());
    if (samples <= 0)
        samples = 8 * n;
    const double rootZ = std::sqrt(static_cast<double>(pilotLength));

    AoaSpectrum mean;
    for (std::size_t k = 0; k < despreads.size(); ++k)
    {
        cvec residual = despreads[k];
        for (const PathEstimate& est : dataEstimates[k])
            residual -= rootZ * est.gain * steering_vector(est.angle, n);

        AoaSpectrum spec = aoa_spectrum(residual, samples);
        if (mean.samples == 0)
            mean = spec;
        else
            mean.values += spec.values;
    }
    mean.values /= static_cast<double>(despreads.size());

    PeakDetectParams weakOnly = params;
    weakOnly.strongCount = 0;

    std::vector<PhaseAngle> out;
    for (const SpectrumPeak& p : detect_peaks(mean, mode, weakOnly))
        if (!p.strong)
            out.push_back(PhaseAngle(p.angle));
    return out;
}

// Coherent-combining gain estimate: project the observation on the steering
// vector of the (estimated) angle, a = v(Phi)^H y / N.
inline cplx gain_cc(const cvec& observation, PhaseAngle angle)
{
    const int n = static_cast<int>(observation.size());
    return steering_vector(angle, n).dot(observation) / static_cast<double>(n);
}

// Zero-forcing gain estimate: beamform with an exact null on every listed
// interference angle and renormalize by the beam's target response,
// a = f^H y / (f^H v(Phi)). Unbiased for any interferer strength when the
// angles are exact; pays a noise-enhancement price when target and null are
// close.
//
// The materialized column nulls each interference direction only to ~1e-12
// absolute in floating point, so a 1e6-strength interferer would leak a
// ~1e-6 additive error through the combiner. The implementation therefore
// measures the residual responses s_m = f^H v(theta_m) in extended
// precision, recovers reference amplitudes for every basis direction with a
// small least-squares solve, and subtracts s_m * b_m from the combined
// output. The correction is O(1e-12 * b_m): the estimator's weights, bias,
// and noise variance are untouched, only the floating-point leakage goes.
// If the steering basis is too close to collinear for the solve to be
// trusted, the correction is skipped and the raw combiner value is returned.
inline cplx gain_zf(const cvec& observation, PhaseAngle targetAngle,
                    const std::vector<PhaseAngle>& nullAngles, const FactorShape& shape)
{
    if (observation.size() != shape.total())
        throw std::invalid_argument("gain_zf: observation length must match shape size");

    ZfBeamformer zf = kron_zf_beamformer(targetAngle, nullAngles, shape);
    const int n = static_cast<int>(shape.total());
    if (std::abs(zf.targetResponse) < 1e-12 * static_cast<double>(n))
        throw DegenerateScenario("gain_zf: beam response vanished at the target angle");

    using lcplx = std::complex<long double>;
    auto ldot = [n](const cvec& x, const cvec& y) {
        lcplx acc(0.0L, 0.0L);
        for (int i = 0; i < n; ++i)
            acc += lcplx(std::conj(x[i])) * lcplx(y[i]);
        return acc;
    };

    std::vector<cvec> basis; // target direction first, then the nulls
    basis.reserve(nullAngles.size() + 1);
    basis.push_back(steering_vector(targetAngle, n));
    for (const PhaseAngle& t : nullAngles)
        basis.push_back(steering_vector(t, n));
    const std::size_t d = basis.size();

    lcplx combined = ldot(zf.column, observation);
    const lcplx targetResponse = ldot(zf.column, basis[0]);

    if (d > 1)
    {
        // Gram system G b = r for the reference amplitudes, solved by an
        // in-place Cholesky factorization in long double.
        std::vector<lcplx> gram(d * d), rhs(d);
        for (std::size_t i = 0; i < d; ++i)
        {
            rhs[i] = ldot(basis[i], observation);
            for (std::size_t j = 0; j <= i; ++j)
            {
                gram[i * d + j] = ldot(basis[i], basis[j]);
                gram[j * d + i] = std::conj(gram[i * d + j]);
            }
        }

        const long double pivotFloor = static_cast<long double>(n) * 1e-10L;
        bool solved = true;
        for (std::size_t k = 0; k < d && solved; ++k)
        {
            long double diag = gram[k * d + k].real();
            for (std::size_t j = 0; j < k; ++j)
                diag -= std::norm(gram[k * d + j]);
            if (!(diag > pivotFloor))
            {
                solved = false;
                break;
            }
            const long double root = std::sqrt(diag);
            gram[k * d + k] = lcplx(root, 0.0L);
            for (std::size_t i = k + 1; i < d; ++i)
            {
                lcplx v = gram[i * d + k];
                for (std::size_t j = 0; j < k; ++j)
                    v -= gram[i * d + j] * std::conj(gram[k * d + j]);
                gram[i * d + k] = v / root;
            }
        }
        if (solved)
        {
            for (std::size_t i = 0; i < d; ++i) // forward: L c = rhs
            {
                lcplx v = rhs[i];
                for (std::size_t j = 0; j < i; ++j)
                    v -= gram[i * d + j] * rhs[j];
                rhs[i] = v / gram[i * d + i].real();
            }
            for (std::size_t ii = d; ii-- > 0;) // backward: L^H b = c
            {
                lcplx v = rhs[ii];
                for (std::size_t j = ii + 1; j < d; ++j)
                    v -= std::conj(gram[j * d + ii]) * rhs[j];
                rhs[ii] = v / gram[ii * d + ii].real();
            }
            for (std::size_t m = 1; m < d; ++m)
                combined -= ldot(zf.column, basis[m]) * rhs[m];
        }
    }

    const lcplx est = combined / targetResponse;
    return cplx(static_cast<double>(est.real()), static_cast<double>(est.imag()));
}

// Pilot cross-correlations gamma_n = interfering_n . intended_k / sqrt(Z);
// zero-mean, unit-variance over Rademacher draws.
inline std::vector<double> realized_gammas(const PilotBook& book, int userIndex)
{
    if (userIndex < 0 || userIndex >= book.intended.rows())
        throw std::invalid_argument("realized_gammas: user index out of range");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(book.interfering.rows()));
    for (int m = 0; m < book.interfering.rows(); ++m)
        out.push_back(book.interfering.row(m).dot(book.intended.row(userIndex)) /
                      std::sqrt(static_cast<double>(book.intended.cols())));
    return out;
}

// Pilot-contamination level and its closed-form envelope bound. eta is the
// largest perturbation the realized interference inflicts on the despread
// spectrum at any true data-path angle (complex correlation kernel, so
// cross-interferer phases may cancel); the bound replaces every kernel value
// by the envelope 2/(N * separation), giving
//   bound = 2 sum_n |gamma_n beta_n| / (sqrt(Z) N min-separation).
inline std::pair<double, double> contamination_level(const Scenario& sc, const PilotBook& book,
                                                     const std::vector<double>& realizedGammas)
{
    const int m = sc.config.interferers;
    if (m == 0)
        return {0.0, 0.0};
    if (static_cast<int>(realizedGammas.size()) != m)
        throw std::invalid_argument("contamination_level: one gamma per interferer required");
    if (book.intended.cols() != sc.config.pilotLength)
        throw std::invalid_argument("contamination_level: pilot length mismatch");

    const int n = sc.config.antennas;
    const double rootZ = std::sqrt(static_cast<double>(sc.config.pilotLength));

    double minSep = two_pi;
    for (const auto& user : sc.dataPaths)
        for (const PathComponent& dp : user)
            for (const PathComponent& ip : sc.interfPaths)
                minSep = std::min(minSep, circular_distance(dp.angle, ip.angle));
    if (minSep == 0.0)
        throw std::invalid_argument("contamination_level: zero data/interference separation");

    double eta = 0.0;
    double amplitudeSum = 0.0;
    for (int i = 0; i < m; ++i)
        amplitudeSum += std::fabs(realizedGammas[i]) *
                        std::sqrt(sc.config.interferer_power(i)) * std::abs(sc.interfPaths[i].gain);

    for (const auto& user : sc.dataPaths)
        for (const PathComponent& dp : user)
        {
            cvec probe = steering_vector(dp.angle, n);
            cplx c(0.0, 0.0);
            for (int i = 0; i < m; ++i)
            {
                cplx kernel = probe.dot(steering_vector(sc.interfPaths[i].angle, n)) /
                              static_cast<double>(n);
                c += realizedGammas[i] * std::sqrt(sc.config.interferer_power(i)) *
                     sc.interfPaths[i].gain * kernel;
            }
            eta = std::max(eta, std::abs(c) / rootZ);
        }

    double bound = 2.0 * amplitudeSum / (rootZ * n * minSep);
    return {eta, bound};
}

// Deterministic error bound for the CC estimate of one data path:
//   2 alpha_max (L + M - 1) / (Psi_min N),
// with alpha_max the largest amplitude among the user's paths and the
// (power-scaled) interferers, and Psi_min the smallest separation between
// the target angle and any other impinging direction.
inline double cc_error_bound(const Scenario& sc, int targetPathIndex, int userIndex = 0)
{
    if (userIndex < 0 || userIndex >= sc.config.users)
        throw std::invalid_argument("cc_error_bound: user index out of range");
    const auto& paths = sc.dataPaths[userIndex];
    if (targetPathIndex < 0 || targetPathIndex >= static_cast<int>(paths.size()))
        throw std::invalid_argument("cc_error_bound: path index out of range");

    const PhaseAngle target = paths[targetPathIndex].angle;
    double alphaMax = 0.0;
    double psiMin = two_pi;
    for (int l = 0; l < static_cast<int>(paths.size()); ++l)
    {
        alphaMax = std::max(alphaMax, std::abs(paths[l].gain));
        if (l != targetPathIndex)
            psiMin = std::min(psiMin, circular_distance(target, paths[l].angle));
    }
    for (int i = 0; i < sc.config.interferers; ++i)
    {
        alphaMax = std::max(alphaMax, std::sqrt(sc.config.interferer_power(i)) *
                                          std::abs(sc.interfPaths[i].gain));
        psiMin = std::min(psiMin, circular_distance(target, sc.interfPaths[i].angle));
    }

    const int terms = static_cast<int>(paths.size()) + sc.config.interferers - 1;
    if (terms == 0)
        return 0.0;
    if (psiMin == 0.0)
        throw std::invalid_argument("cc_error_bound: zero separation");
    return 2.0 * alphaMax * terms / (psiMin * sc.config.antennas);
}

// Predicted CC/ZF mean-error ratio rho / sqrt(N) + |Phi - Theta| / 2 for the
// single-path, single-interferer regime (rho: interference-to-noise
// amplitude ratio). Values below 1 favor CC, above 1 favor ZF.
inline double predicted_error_ratio(double rho, int n, PhaseAngle phi, PhaseAngle theta)
{
    if (n < 2)
        throw std::invalid_argument("predicted_error_ratio: array size must be >= 2");
    return rho / std::sqrt(static_cast<double>(n)) + circular_distance(phi, theta) / 2.0;
}

// Symbol slots needed to scan the grid with nrf simultaneous beams.
inline int scan_slots(int samples, int nrf)
{
    if (samples < 1 || nrf < 1)
        throw std::invalid_argument("scan_slots: arguments must be >= 1");
    return (samples + nrf - 1) / nrf;
}

// ---------------------------------------------------------------------------
// Full two-stage pipeline: despread per user, detect data paths, estimate
// gains, then recover interference angles by decision feedback.
// ---------------------------------------------------------------------------

struct EstimationOptions
{
    int samplesPerAntenna = 8; // scan grid N_sam = this * N
    bool refinePeaks = true;   // ternary-search refinement around grid peaks
    int refineIters = 48;
    double lobeRadiusFactor = 5.5; // suppression radius = this * pi / N
    double lobeRatio = 0.25;
    bool decisionFeedback = true;
};

struct UplinkEstimate
{
    std::vector<std::vector<PathEstimate>> dataPaths; // [user][path]
    std::vector<PhaseAngle> interferenceAngles;
    std::vector<cvec> despreads; // per-user despread vectors (for reuse)
};

namespace detail
{
// Maximize |v(omega)^H y| over [lo, hi] by ternary search (the main lobe is
// unimodal well inside its width).
inline double refine_peak_angle(const cvec& observation, double lo, double hi, int iters)
{
    for (int i = 0; i < iters; ++i)
    {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (spectrum_at(observation, m1) < spectrum_at(observation, m2))
            lo = m1;
        else
            hi = m2;
    }
    return canonical_angle(0.5 * (lo + hi));
}
} // namespace detail

inline UplinkEstimate estimate_uplink(const cmat& trainingY, const PilotBook& book,
                                      const SystemConfig& config,
                                      const EstimationOptions& opts = {})
{
    const int n = config.antennas;
    const int samples = std::max(2 * n, opts.samplesPerAntenna * n);
    const double rootZ = std::sqrt(static_cast<double>(config.pilotLength));
    const double lobeRadius = opts.lobeRadiusFactor * (two_pi / 2.0) / n;

    UplinkEstimate out;
    out.dataPaths.resize(config.users);
    out.despreads.reserve(config.users);

    PeakDetectParams strongParams;
    strongParams.strongCount = config.pathsPerUser;
    strongParams.lobeRadius = lobeRadius;
    strongParams.lobeRatio = opts.lobeRatio;

    for (int k = 0; k < config.users; ++k)
    {
        cvec d = despread(trainingY, book.intended.row(k));
        AoaSpectrum spec = aoa_spectrum(d, samples);
        for (const SpectrumPeak& p : detect_peaks(spec, PeakMode::Count, strongParams))
        {
            double angle = p.angle;
            if (opts.refinePeaks)
                angle = detail::refine_peak_angle(d, angle - spec.resolution,
                                                  angle + spec.resolution, opts.refineIters);
            PathEstimate est;
            est.angle = PhaseAngle(angle);
            est.gain = gain_cc(d, est.angle) / rootZ; // despread carries sqrt(Z) g
            est.hasGain = true;
            est.strong = true;
            est.owner = k;
            out.dataPaths[k].push_back(est);
        }
        out.despreads.push_back(std::move(d));
    }

    if (opts.decisionFeedback && config.interferers > 0)
    {
        PeakDetectParams weakParams;
        weakParams.weakCount = config.interferers;
        weakParams.lobeRadius = lobeRadius;
        weakParams.lobeRatio = opts.lobeRatio;
        out.interferenceAngles = decision_feedback_interference_aoa(
            out.despreads, out.dataPaths, config.pilotLength, PeakMode::Count, weakParams,
            samples);
    }
    return out;
}

} // namespace kronbeam
