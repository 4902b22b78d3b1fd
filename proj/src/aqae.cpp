#include "cno/aqae.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cno/anneal.hpp"
#include "cno/evolution.hpp"

namespace cno {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double pct_change(double prev, double cur) {
    if (prev == 0.0) {
        return cur == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return 100.0 * std::abs(cur - prev) / std::abs(prev);
}

struct Checkpoint {
    int zoom;
    RVector estimate;
    double energy;
};

}  // namespace

void AqaeConfig::validate() const {
    if (bits < 1) {
        throw InvalidArgument("AQAE needs K >= 1");
    }
    if (max_zoom < 1) {
        throw InvalidArgument("AQAE needs max_zoom >= 1");
    }
    if (reads < 1 || sweeps < 0) {
        throw InvalidArgument("AQAE annealer settings need reads >= 1 and sweeps >= 0");
    }
    if (convergence_window < 1 || !(convergence_pct > 0.0)) {
        throw InvalidArgument("convergence window and percentage must be positive");
    }
    if (steps < 1) {
        throw InvalidArgument("clock needs at least one step");
    }
    if (!(energy_tolerance >= 0.0)) {
        throw InvalidArgument("energy tolerance must be nonnegative");
    }
}

std::optional<int> AqaeResult::zoom_reaching(double target) const {
    for (const auto& it : iterations) {
        if (it.overlap && *it.overlap >= target) {
            return it.zoom;
        }
    }
    return std::nullopt;
}

bool converged(std::span<const double> energies, const AqaeConfig& cfg) {
    const auto window = static_cast<std::size_t>(cfg.convergence_window);
    if (energies.size() < window + 1) {
        return false;
    }
    for (std::size_t k = energies.size() - window; k < energies.size(); ++k) {
        if (!(pct_change(energies[k - 1], energies[k]) < cfg.convergence_pct)) {
            return false;
        }
    }
    return true;
}

AqaeResult run_aqae(const CMatrix& h, const CVector& initial, double dt, const AqaeConfig& cfg) {
    cfg.validate();
    if (cfg.max_block_size != 0 && static_cast<std::size_t>(h.rows()) > cfg.max_block_size) {
        throw InvalidArgument("block of " + std::to_string(h.rows()) +
                              " states exceeds the configured cap of " +
                              std::to_string(cfg.max_block_size));
    }
    const ClockMatrix clock = build_clock(h, initial, dt, cfg.steps, cfg.penalty_weight);
    const RMatrix real_c = real_embed(clock.matrix);
    const Eigen::Index d = h.rows();
    const Eigen::Index m = d * clock.registers();  // complex clock dimension

    RVector x = RVector::Zero(2 * m);
    x.segment(0, d) = initial.real();
    x.segment(m, d) = initial.imag();

    std::vector<bool> active(static_cast<std::size_t>(2 * m), true);
    if (cfg.freeze_initial) {
        for (Eigen::Index a = 0; a < d; ++a) {
            active[static_cast<std::size_t>(a)] = false;
            active[static_cast<std::size_t>(m + a)] = false;
        }
    }
    std::size_t n_active = 0;
    for (bool a : active) {
        n_active += a ? 1 : 0;
    }

    std::optional<CVector> exact;
    if (cfg.track_overlap) {
        exact = SpectralPropagator(h).evolve(initial, dt * cfg.steps);
    }
    auto final_register = [&](const RVector& est) {
        CVector v(d);
        const Eigen::Index off = static_cast<Eigen::Index>(cfg.steps) * d;
        for (Eigen::Index a = 0; a < d; ++a) {
            v(a) = Complex{est(off + a), est(m + off + a)};
        }
        return v;
    };
    auto overlap_of = [&](const RVector& est) -> std::optional<double> {
        if (!exact) {
            return std::nullopt;
        }
        const CVector v = final_register(est);
        const double n = v.norm();
        return n > 0.0 ? std::abs(exact->dot(v)) / n : 0.0;
    };

    Eigen::SelfAdjointEigenSolver<RMatrix> spectrum(real_c, Eigen::EigenvaluesOnly);
    const double c_norm = spectrum.eigenvalues().cwiseAbs().maxCoeff();

    AqaeResult result;
    result.initial_energy = x.dot(real_c * x);
    std::vector<double> energies{result.initial_energy};
    std::vector<Checkpoint> checkpoints;

    std::vector<Direction> directions{Direction::Forward};
    if (cfg.reverse_enabled) {
        directions.push_back(Direction::Reverse);
    }

    std::uint64_t call = 0;
    bool just_rewound = false;
    double energy = result.initial_energy;
    int z = 0;
    while (z < cfg.max_zoom) {
        for (Direction dir : directions) {
            const DigitizedQubo dq = build_qubo(real_c, {cfg.bits, z, dir}, x, active);
            if (dq.problem.size > 0) {
                AnnealSchedule sched;
                sched.reads = cfg.reads;
                sched.sweeps = cfg.sweeps;
                sched.beta_start = cfg.beta_start;
                sched.beta_end = cfg.beta_end;
                sched.seed = splitmix64(cfg.seed ^ splitmix64(call++));
                const AnnealResult ar = anneal(dq.problem, sched);
                // Every update has the all-zero option, so a worse answer is an annealer miss.
                if (ar.best_energy <= dq.problem.offset) {
                    x = dq.apply(x, ar.best_bits);
                }
            }
            energy = x.dot(real_c * x);
            energies.push_back(energy);
            result.iterations.push_back({z, dir, energy, overlap_of(x), just_rewound});
            just_rewound = false;
        }
        checkpoints.push_back({z, x, energy});
        ++z;
        if (energy <= cfg.energy_tolerance) {
            result.converged = true;
            break;
        }
        const double envelope = c_norm * static_cast<double>(n_active) * std::ldexp(1.0, 2 * (1 - z));
        if (cfg.rewind_enabled && result.rewinds < cfg.max_rewinds && energy > envelope &&
            converged(energies, cfg)) {
            // Stalled above what this zoom level can reach: go back to the last
            // checkpoint that still made real progress and retry with new seeds.
            std::size_t k = checkpoints.size() - 1;
            while (k > 0 && !(pct_change(checkpoints[k - 1].energy, checkpoints[k].energy) >=
                                  cfg.convergence_pct &&
                              checkpoints[k].energy < checkpoints[k - 1].energy)) {
                --k;
            }
            const Checkpoint restore = checkpoints[k];
            checkpoints.resize(k + 1);
            x = restore.estimate;
            energy = restore.energy;
            z = restore.zoom + 1;
            energies.push_back(energy);
            ++result.rewinds;
            just_rewound = true;
        }
    }

    result.zoom_steps = z;
    result.final_energy = energy;
    result.estimate = x;
    CVector v = final_register(x);
    const double n = v.norm();
    if (!(n > 0.0)) {
        throw NumericalError("AQAE produced an all-zero final register");
    }
    result.final_state = v / n;
    std::ostringstream status;
    if (result.converged) {
        status << "converged: clock energy " << energy << " <= " << cfg.energy_tolerance
               << " after " << z << " zoom steps";
    } else {
        status << "nonconvergence: clock energy " << energy << " above tolerance "
               << cfg.energy_tolerance << " after " << z << " zoom steps, " << result.rewinds
               << " rewinds";
    }
    result.status = status.str();
    return result;
}

std::vector<BlockedTimeResult> run_aqae_blocked(const SystemSpec& spec, const StateVector& initial,
                                                std::span<const double> times,
                                                const AqaeConfig& cfg, bool oracle) {
    spec.validate();
    if (spec.statistics != Statistics::Dirac || spec.has_antineutrino()) {
        throw InvalidArgument(
            "domain decomposition needs a Dirac nu-nu system; nu-nubar and Majorana "
            "Hamiltonians are not block-diagonal in mass occupation");
    }
    if (initial.nf() != spec.nf || initial.n_modes() != spec.n_modes) {
        throw InvalidArgument("initial state does not match the system size");
    }
    if (std::abs(initial.norm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("initial state is not normalized");
    }
    const StateVector mass = initial.basis() == Basis::Mass
                                 ? initial
                                 : change_basis(initial, Basis::Mass, spec.pmns);
    const HamiltonianMatrix h = build_dirac_hamiltonian(spec, Basis::Mass);
    const auto blocks = mass_blocks(spec.nf, spec.n_modes);
    std::vector<CMatrix> sub_h;
    sub_h.reserve(blocks.size());
    for (const auto& b : blocks) {
        sub_h.push_back(restrict_to_block(h, b));
    }

    std::vector<BlockedTimeResult> out;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        CVector assembled = CVector::Zero(static_cast<Eigen::Index>(mass.dim()));
        std::vector<BlockRun> runs;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& block = blocks[bi];
            BlockRun run;
            run.block = bi;
            run.occupation = block.occupation;
            run.size = block.indices.size();
            CVector v(static_cast<Eigen::Index>(block.indices.size()));
            for (std::size_t k = 0; k < block.indices.size(); ++k) {
                v(static_cast<Eigen::Index>(k)) =
                    mass.amplitudes()(static_cast<Eigen::Index>(block.indices[k]));
            }
            run.weight = v.norm();
            if (run.weight <= 1e-12) {
                run.skipped = true;
                run.status = "skipped: zero weight";
                runs.push_back(std::move(run));
                continue;
            }
            v /= run.weight;
            AqaeConfig block_cfg = cfg;
            block_cfg.seed = splitmix64(cfg.seed ^ splitmix64((ti << 20) + bi + 1));
            AqaeResult r;
            try {
                r = run_aqae(sub_h[bi], v, t, block_cfg);
            } catch (const std::exception& e) {
                throw NumericalError("block " + std::to_string(bi) + " (size " +
                                     std::to_string(run.size) + ") at t=" + std::to_string(t) +
                                     ": " + e.what());
            }
            run.converged = r.converged;
            run.zoom_steps = r.zoom_steps;
            run.rewinds = r.rewinds;
            run.final_energy = r.final_energy;
            run.status = r.status;
            run.iterations = r.iterations;
            if (oracle) {
                const CVector ex = SpectralPropagator(sub_h[bi]).evolve(v, t * cfg.steps);
                run.overlap = std::abs(ex.dot(r.final_state));
            }
            for (std::size_t k = 0; k < block.indices.size(); ++k) {
                assembled(static_cast<Eigen::Index>(block.indices[k])) =
                    run.weight * r.final_state(static_cast<Eigen::Index>(k));
            }
            runs.push_back(std::move(run));
        }
        assembled /= assembled.norm();
        StateVector flavor = change_basis(StateVector(std::move(assembled), Basis::Mass, spec.nf,
                                                      spec.n_modes),
                                          Basis::Flavor, spec.pmns);
        WitnessReport w = witness_report(flavor, t);
        out.push_back({t, std::move(runs), std::move(flavor), std::move(w)});
    }
    return out;
}

}  // namespace cno
