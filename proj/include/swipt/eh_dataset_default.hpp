// Embedded copy of the synthetic rectifier measurement dataset shipped in
// data/eh_curves.csv (rows: q, p_in_dbm, p_eh_dbm; -250 dBm marks zero
// harvest below turn-on).
#pragma once

namespace swipt {

inline constexpr const char* kDefaultEhDataset = R"csv(q,p_in_dbm,p_eh_dbm
1,-36.0,-250.0
1,-34.0,-250.0
1,-32.0,-250.0
1,-30.0,-250.0
1,-28.0,-250.0
1,-26.0,-250.0
1,-24.0,-250.0
1,-22.0,-250.0
1,-20.0,-250.0
1,-18.0,-250.0
1,-16.0,-250.0
1,-14.0,-250.0
1,-12.0,-18.350149
1,-10.0,-15.296544
1,-8.0,-12.680224
1,-6.0,-10.242939
1,-4.0,-7.903754
1,-2.0,-5.626619
1,0.0,-3.392306
1,2.0,-1.189334
1,4.0,0.989700
1,6.0,0.989700
2,-36.0,-250.0
2,-34.0,-250.0
2,-32.0,-250.0
2,-30.0,-250.0
2,-28.0,-250.0
2,-26.0,-250.0
2,-24.0,-250.0
2,-22.0,-250.0
2,-20.0,-250.0
2,-18.0,-24.179815
2,-16.0,-21.126210
2,-14.0,-18.509891
2,-12.0,-16.072605
2,-10.0,-13.733420
2,-8.0,-11.456286
2,-6.0,-9.221972
2,-4.0,-7.019000
2,-2.0,-4.839967
2,0.0,-4.839967
2,2.0,-4.839967
2,4.0,-4.839967
2,6.0,-4.839967
4,-36.0,-250.0
4,-34.0,-250.0
4,-32.0,-250.0
4,-30.0,-250.0
4,-28.0,-250.0
4,-26.0,-250.0
4,-24.0,-250.0
4,-22.0,-28.257241
4,-20.0,-25.203636
4,-18.0,-22.587317
4,-16.0,-20.150031
4,-14.0,-17.810846
4,-12.0,-15.533712
4,-10.0,-13.299398
4,-8.0,-11.096426
4,-6.0,-8.917393
4,-4.0,-6.757241
4,-2.0,-6.757241
4,0.0,-6.757241
4,2.0,-6.757241
4,4.0,-6.757241
4,6.0,-6.757241
8,-36.0,-250.0
8,-34.0,-250.0
8,-32.0,-250.0
8,-30.0,-250.0
8,-28.0,-250.0
8,-26.0,-32.320937
8,-24.0,-29.267332
8,-22.0,-26.651012
8,-20.0,-24.213727
8,-18.0,-21.874542
8,-16.0,-19.597407
8,-14.0,-17.363094
8,-12.0,-15.160122
8,-10.0,-12.981088
8,-8.0,-10.820937
8,-6.0,-8.676062
8,-4.0,-8.676062
8,-2.0,-8.676062
8,0.0,-8.676062
8,2.0,-8.676062
8,4.0,-8.676062
8,6.0,-8.676062
16,-36.0,-250.0
16,-34.0,-250.0
16,-32.0,-250.0
16,-30.0,-36.373507
16,-28.0,-33.319902
16,-26.0,-30.703583
16,-24.0,-28.266297
16,-22.0,-25.927112
16,-20.0,-23.649978
16,-18.0,-21.415664
16,-16.0,-19.212693
16,-14.0,-17.033659
16,-12.0,-14.873507
16,-10.0,-12.728633
16,-8.0,-10.596373
16,-6.0,-10.596373
16,-4.0,-10.596373
16,-2.0,-10.596373
16,0.0,-10.596373
16,2.0,-10.596373
16,4.0,-10.596373
16,6.0,-10.596373
)csv";

} // namespace swipt
