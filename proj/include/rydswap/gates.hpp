// Gate protocols, realized-gate extraction and gate metrics.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydswap/dynamics.hpp"

namespace rydswap {

enum class Variant {
  kSwap,
  kISwap,
  kSqrtISwap,
  kBSwap,
  kCISwap,
  kCSwapCCSdag,
  kCkSwap,
  kMuxSwap4T,
  kMuxSwap3T,
};

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);
bool is_controlled(Variant v);

// kProjected switches a target drive off while another target of its
// blockade group is Rydberg excited; kFinite keeps every drive and relies on
// the V_tt shift.
enum class BlockadeModel { kProjected, kFinite };

// kPositiveEnergy reports a state shifted up by E as acquiring phase +E t;
// kStandard is the plain exp(-iHt) propagator.
enum class PhaseConvention { kPositiveEnergy, kStandard };

struct PhaseAdjust {
  int atom = 0;
  double phi = 0.0;  // rad, applied as |0><0| + e^{i phi}|1><1|
};

struct GateParams {
  double omega1_max = kTwoPi * 33.5;  // rad/us
  double omega2 = kTwoPi * 190.8;
  double delta = kTwoPi * 999.73;
  double v_tt = kTwoPi * 700.0;
  double v_ct = 22140.0;
  std::vector<double> v_ct_targets;   // per-target override of v_ct
  std::optional<double> v_cc;         // control-control shift, defaults to v_ct
  double v_block = kTwoPi * 3000.0;   // blockading entry of the multiplexed graph
  double gate_time = 4.7259;          // us
  double sigma_ratio = 0.25;
  double omega_c = kTwoPi * 10.0;
  double tau = 400.0;                 // us, Rydberg lifetime; <= 0 disables decay
  int controls = 2;                   // Ck_SWAP only
  BlockadeModel blockade = BlockadeModel::kProjected;
  PhaseConvention convention = PhaseConvention::kPositiveEnergy;
  std::optional<std::vector<PhaseAdjust>> phase_adjust;  // overrides the variant default
  std::vector<InteractionEntry> extra_interactions;
};

// Table-row parameter sets.
GateParams table1_params(Variant v);

struct GateProtocol {
  Variant variant = Variant::kSwap;
  GateParams params;
  StagePlan plan;
  int n_controls = 0;
  int n_atoms = 0;
  std::vector<PhaseAdjust> phase_adjust;
  CMatrix ideal;
  bool flank_x = false;  // bSWAP: ideal X on the last target before and after
};

GateProtocol make_protocol(Variant variant, const GateParams& params);
std::vector<PhaseAdjust> default_phase_adjust(Variant v, int n_controls, int n_targets);
CMatrix ideal_unitary(Variant v, int n_controls, int n_targets);

struct RunOptions {
  bool with_loss = true;           // second run with decay for loss and fidelity_with_loss
  bool phase_optimized = false;    // also compute the phase-optimized fidelity
  std::optional<StepPolicy> policy;
};

struct GateReport {
  CMatrix u_gate;       // decay-free, after phase adjustments
  CMatrix u_lossy;      // with decay (empty if not computed)
  double fidelity = 0.0;
  double fidelity_with_loss = 0.0;
  double phase_optimized_fidelity = 0.0;
  std::vector<double> phase_optimal;  // per-atom extra phases found
  std::vector<double> loss;           // per computational input
  CMatrix loss_matrix;                // real, placed where the ideal maps each input
  double mean_loss = 0.0;
  std::vector<double> rydberg_time;   // per input, us
  double t_bar_r = 0.0;
  double step_scale = 1.0;
};

GateReport run_gate(const GateProtocol& protocol, const NoiseRealization* noise = nullptr,
                    const RunOptions& options = {});

// Computational-subspace matrix of one propagation: frame removed, phase
// convention applied, before phase adjustments.
CMatrix extract_gate(const GateProtocol& protocol, const CMatrix& final_state);
CMatrix phase_adjust_matrix(int n_atoms, const std::vector<PhaseAdjust>& adjust);

double process_fidelity(const CMatrix& u, const CMatrix& ideal);
// Fidelity after replacing each element by its modulus times the ideal phase.
double rotation_fidelity(const CMatrix& u, const CMatrix& ideal);
// Maximum fidelity over extra single-atom phases on `atoms` (all if empty).
double phase_optimized_fidelity(const CMatrix& u, const CMatrix& ideal, int n_atoms,
                                std::vector<double>* phases = nullptr,
                                const std::vector<int>& atoms = {});
double rydberg_exposure(const GateReport& report);

// Per control configuration, the target block against the expected target
// gate: rotation fidelity (routing of populations) and the fidelity after
// optimal single-target phases.
struct ConditionalFidelity {
  int control_config = 0;
  double fidelity = 0.0;
  double phase_optimized = 0.0;
  double transfer = 0.0;  // mean population on the ideal output states
};
std::vector<ConditionalFidelity> conditional_fidelities(const GateProtocol& protocol,
                                                        const GateReport& report);

// Phase of U(i,j) in units of pi, wrapped to (-1, 1].
double phase_pi(cplx z);

}  // namespace rydswap
