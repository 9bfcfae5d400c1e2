// Embedded experiment presets, one per reproduced result figure plus a fast
// smoke scenario. `presets/*.cfg` in the repository mirror these texts.
#pragma once

#include <string>
#include <vector>

namespace swipt {

struct Preset {
    std::string name;
    std::string description;
    std::string text;
};

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        {"fig8_cdf_ps",
         "PS-branch PAPR-estimate CDF vs gamma across tone counts, multi-tone mode",
         R"cfg(# PS-branch PAPR-estimate CDF across tone counts
[experiment]
kind = cdf
branch = ps
mode = multi
out = fig8_cdf_ps.csv
seed = 8
trials = 3000

[signal]
p_dr_dbm = -10

[sweep]
n_active = 1,2,4,8,16
gamma_lo = 1
gamma_hi = 40
gamma_points = 79
)cfg"},
        {"fig9_cdf_fs",
         "FS-branch PAPR-estimate CDF vs gamma across tone counts, single-tone mode",
         R"cfg(# FS-branch PAPR-estimate CDF across tone counts
[experiment]
kind = cdf
branch = fs
mode = single
out = fig9_cdf_fs.csv
seed = 9
trials = 3000

[signal]
p_dr_dbm = -10

[sweep]
n_active = 1,2,4,8,16
gamma_lo = 1
gamma_hi = 40
gamma_points = 79
)cfg"},
        {"fig10_ser_single",
         "single-tone-mode SER vs HPA drive power, Monte-Carlo and analytical",
         R"cfg(# single-tone-mode SER vs drive power
[experiment]
kind = ser
mode = single
out = fig10_ser_single.csv
seed = 10
trials = 4000

[sweep]
p_dr_dbm = -20,-16,-12,-8,-4,0
)cfg"},
        {"fig11_ser_modes",
         "SER vs drive power for both transmit modes",
         R"cfg(# SER vs drive power, both modes
[experiment]
kind = ser
mode = both
out = fig11_ser_modes.csv
seed = 11
trials = 4000

[sweep]
p_dr_dbm = -20,-16,-12,-8,-4,0
)cfg"},
        {"fig12_outage",
         "outage probability vs drive power over fading-correlation settings",
         R"cfg(# outage probability vs drive power
[experiment]
kind = outage
out = fig12_outage.csv
seed = 12
blocks = 3000

[control]
ser_tag = 0.01

[sweep]
p_dr_dbm = -20,-16,-12,-8,-4,0
zeta = 0.99,0.9
)cfg"},
        {"fig13_training",
         "threshold-label sweep plus TCN training-loss history and checkpoint",
         R"cfg(# long-term controller training: labels, loss history, checkpoint
[experiment]
kind = training
out_labels = fig13_labels.csv
out_loss = fig13_loss.csv
out_checkpoint = fig13_tcn_checkpoint.txt
seed = 13
blocks = 1500

[control]
ser_tag = 0.01
window = 20
label_window = 1000

[tcn]
epochs = 15
learning_rate = 0.01
channels = 16
batch = 64

[sweep]
p_dr_dbm = -16,-13,-10,-7,0,6
)cfg"},
        {"fig14_rate",
         "mean achievable rate vs drive power for fixed / exhaustive / learned control",
         R"cfg(# controller comparison: mean achievable rate vs drive power
[experiment]
kind = rate
out = fig14_rate.csv
seed = 14
blocks = 2000

[control]
ser_tag = 0.01
window = 20
label_window = 1000
fixed_th_dbm = -6

[tcn]
epochs = 15
learning_rate = 0.01
channels = 16
batch = 64
train_blocks = 1500

[sweep]
p_dr_dbm = -16,-12,-8,-4,-2
)cfg"},
        {"unit_scale",
         "fast end-to-end smoke scenario exercising every subsystem",
         R"cfg(# fast smoke scenario
[experiment]
kind = smoke
out = unit_scale.csv
seed = 1
trials = 300
blocks = 300

[signal]
q_total = 4

[control]
q_set = 2,4
)cfg"},
    };
    return all;
}

inline const Preset* find_preset(const std::string& name) {
    for (const Preset& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

} // namespace swipt
