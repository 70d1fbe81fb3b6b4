// Compares the OpenMP kernels against their serial reference
// implementations on the three hot paths: exhaustive colouring
// enumeration, rational triad enumeration, and hidden-state shot batches.
// Verifies that both sides produce identical results before timing.

#include <chrono>
#include <cstdio>
#include <filesystem>

#include <omp.h>

#include "ncsim/ck.hpp"
#include "ncsim/gz.hpp"
#include "ncsim/ks_colouring.hpp"
#include "ncsim/phiplus.hpp"
#include "ncsim/vector_set.hpp"

using namespace ncsim;

namespace {

template <typename F>
double time_s(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-32s serial %8.3fs  openmp %8.3fs  speedup %5.2fx\n", name, serial,
                parallel, serial / parallel);
}

} // namespace

int main(int argc, char** argv) {
    const std::filesystem::path data = argc > 1 ? argv[1] : "data";
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        const VectorSet set = load_vector_set(data / "catalogues" / "cabello18.json");
        const OrthogonalityStructure structure = build_orthogonality(set);
        std::uint64_t serial_count = 0, parallel_count = 0;
        const double ts = time_s([&] { serial_count = count_valid_colourings_serial(structure); });
        const double tp = time_s([&] { parallel_count = count_valid_colourings(structure); });
        if (serial_count != parallel_count) {
            std::printf("MISMATCH in colouring counts\n");
            return 1;
        }
        report("exhaustive 2^18 colourings", ts, tp);
    }

    {
        std::vector<gz::RationalTriad> serial_triads, parallel_triads;
        const double ts =
            time_s([&] { serial_triads = gz::enumerate_rational_triads_serial(50); });
        const double tp =
            time_s([&] { parallel_triads = gz::enumerate_rational_triads(50); });
        if (serial_triads != parallel_triads) {
            std::printf("MISMATCH in triad enumeration\n");
            return 1;
        }
        report("rational triads M=50", ts, tp);
    }

    {
        const auto contexts = phiplus::build_contexts();
        const auto model = ck::build_submodel(contexts, 1e-3, 11);
        const QuantumState state = phiplus::phi_plus_state();
        constexpr std::uint64_t shots = 200000;
        std::vector<ck::ShotRecord> serial_records, parallel_records;
        const double ts = time_s([&] {
            serial_records = ck::run_shot_batch_serial(model, state, contexts, shots, 7);
        });
        const double tp = time_s([&] {
            parallel_records = ck::run_shot_batch(model, state, contexts, shots, 7);
        });
        bool same = serial_records.size() == parallel_records.size();
        for (std::size_t i = 0; same && i < serial_records.size(); ++i) {
            same = serial_records[i].record.outcome_index ==
                       parallel_records[i].record.outcome_index &&
                   serial_records[i].record.matched_index ==
                       parallel_records[i].record.matched_index;
        }
        if (!same) {
            std::printf("MISMATCH in shot batches\n");
            return 1;
        }
        report("shot batch 2e5 x 5 contexts", ts, tp);
    }
    return 0;
}
