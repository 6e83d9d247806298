#pragma once

// Shared test data.

#include <vector>

#include "trivine/simstudy.hpp"

namespace fixtures {

// Beta margins, Clayton90 blocks, conditional independence:
// pi = (0.8, 0.7, 0.4), gamma = (0.1, 0.1, 0.05), tau12 = -0.5, tau13 = -0.3.
inline trivine::SimScenario table1_scenario(int n_studies = 20, int replications = 1, std::uint64_t seed = 2016) {
    trivine::SimScenario s;
    s.n_studies = n_studies;
    s.replications = replications;
    s.seed = seed;
    s.true_spec = trivine::parse_model("beta:Clayton90/Clayton90:1");
    s.true_params.pi = {0.8, 0.7, 0.4};
    s.true_params.disp = {0.1, 0.1, 0.05};
    s.true_params.tau = {-0.5, -0.3, 0.0};
    s.fit_specs = {s.true_spec};
    return s;
}

inline std::vector<trivine::StudyRecord> table1_data(int n_studies = 20, std::uint64_t replicate = 0) {
    return trivine::generate_dataset(table1_scenario(n_studies), replicate);
}

// Eight hand-made studies with moderate counts.
inline std::vector<trivine::StudyRecord> eight_studies() {
    using trivine::StudyRecord;
    return {StudyRecord::from_2x2(40, 14, 9, 87),  StudyRecord::from_2x2(25, 20, 12, 123),
            StudyRecord::from_2x2(18, 5, 3, 54),   StudyRecord::from_2x2(61, 31, 20, 148),
            StudyRecord::from_2x2(22, 12, 4, 70),  StudyRecord::from_2x2(33, 9, 11, 92),
            StudyRecord::from_2x2(14, 17, 8, 101), StudyRecord::from_2x2(47, 22, 6, 130)};
}

// Eight studies drawn from a logit-normal model with sigma near 1 and
// moderate correlations; the Gaussian-vine MLE lies inside the parameter
// space.
inline std::vector<trivine::StudyRecord> glmm_eight() {
    using trivine::StudyRecord;
    return {StudyRecord::from_2x2(8, 4, 1, 21),  StudyRecord::from_2x2(41, 4, 12, 14),
            StudyRecord::from_2x2(9, 7, 1, 39),  StudyRecord::from_2x2(8, 12, 13, 22),
            StudyRecord::from_2x2(5, 3, 3, 13),  StudyRecord::from_2x2(9, 16, 3, 35),
            StudyRecord::from_2x2(8, 5, 0, 46),  StudyRecord::from_2x2(22, 20, 9, 26)};
}

}  // namespace fixtures
