// Frozen expected values for the closed-form statistics, computed by an
// independent numpy implementation of each documented formula. Regenerate
// only if a formula's documented definition changes.
#pragma once

// kPerCases: columns ber, bits, expected
static const double kPerCases[][3] = {
    {0.0, 100.0, 0.0},
    {1.0, 5.0, 1.0},
    {0.01, 100.0, 0.6339676587267709},
    {1e-05, 1024.0, 0.010187800378455125},
    {0.0003, 1024.0, 0.26453041250023734},
    {0.5, 1.0, 0.5},
    {0.5, 2.0, 0.75},
    {0.123, 77.0, 0.9999591710050725},
    {1e-09, 100000.0, 9.999499738877482e-05},
    {0.25, 4.0, 0.68359375},
    {0.037, 512.0, 0.9999999958632525},
    {0.002, 2048.0, 0.9834290061346491},
};

// kSnrCases: columns p_signal, p_noise, expected_db
static const double kSnrCases[][3] = {
    {1.0, 1.0, 0.0},
    {100.0, 1.0, 20.0},
    {2.0, 1.0, 3.010299956639812},
    {1.0, 2.0, -3.010299956639812},
    {10.0, 1.0, 10.0},
    {1.0, 10.0, -10.0},
    {5.5, 2.2, 3.979400086720376},
    {1e-06, 0.001, -30.0},
    {3.7, 0.9, 6.139592146276702},
    {1234.5, 6.7, 22.654162915671247},
    {0.5, 0.5, 0.0},
    {8.0, 64.0, -9.030899869919436},
};

// kPhaseDriftCases: columns f_off_hz, t_symb_s, expected_rad
static const double kPhaseDriftCases[][3] = {
    {0.0, 0.0001, 0.0},
    {5000.0, 0.0001, 3.1415926535897936},
    {100.0, 0.0001, 0.06283185307179587},
    {40.0, 0.0001, 0.025132741228718346},
    {15.0, 0.0001, 0.00942477796076938},
    {-40.0, 0.0001, -0.025132741228718346},
    {1.0, 1.0, 6.283185307179586},
    {250.0, 0.004, 6.283185307179586},
    {33.3, 0.0002, 0.04184601414581605},
    {7.0, 0.001, 0.0439822971502571},
    {10000.0, 5e-05, 3.1415926535897936},
    {0.5, 2.0, 6.283185307179586},
};

// csi_drift: n_sub, then re_prev[], im_prev[], re_now[], im_now[], expected
struct CsiDriftCase { int n_sub; double re_prev[4], im_prev[4], re_now[4], im_now[4]; double expected; };
static const CsiDriftCase kCsiDriftCases[] = {
    {1, {1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, 1.4142135623730951},
    {2, {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {1.0, 3.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, 2.0},
    {2, {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {1.0, 3.0, 0.0, 0.0}, 2.0},
    {4, {1.7413649236993303, 1.1084599159335489, -0.4435935274833576, -3.311222183956799}, {0.27516991286728604, 0.3320310803047519, -0.23422707876768964, -0.23805572977943143}, {-0.9222103525899428, 0.07831179905393194, -0.7750475659757008, 1.5176763082158093}, {-0.02849388700659445, -0.010551928795997673, -0.3523083774254944, 0.12325438585731449}, 2.240175996157654},
    {4, {0.18323601181042884, -1.5030657813781818, -0.36635765222490607, 0.7610464394844353}, {-0.4628673824701523, -0.8887949273918314, 0.983289042161252, -0.29296774522521885}, {-1.8697848603805205, -0.97674968945575, 1.8139584124972035, -0.6911434914409509}, {0.00637224959160776, 0.45683772489113356, -0.43530620417122806, -1.2785113052157457}, 1.9767723417090188},
    {3, {0.5862957201911254, 1.0220223532300428, 1.3344215008700946, 0.0}, {-0.48032994531172, 2.4118553023828646, 0.2982810952585326, 0.0}, {0.9573907169206067, 0.5946961630456037, -1.7839230471619099, 0.0}, {-1.7284928431111009, -0.5236393249053203, -2.3579486109583865, 0.0}, 2.788296686650052},
    {2, {-0.5395516414303634, -1.2940307748903332, 0.0, 0.0}, {-0.7496868664893299, -0.6482978157805838, 0.0, 0.0}, {0.5810592757871368, 0.14630547705731958, 0.0, 0.0}, {1.5369407013130743, 0.6132242052671253, 0.0, 0.0}, 2.2305685281687624},
    {1, {0.1469427566216705, 0.0, 0.0, 0.0}, {-0.4392921893363359, 0.0, 0.0, 0.0}, {0.7758427454741426, 0.0, 0.0, 0.0}, {1.1328592361372514, 0.0, 0.0, 0.0}, 1.6932735457088062},
    {4, {-0.4104949355771558, -0.33036815220484766, -0.10076014275773852, -0.5131680298269815}, {0.3505184640597594, 1.2611111490680391, -0.8865510529779157, -1.8476920014476872}, {-0.43947426282839064, 0.148981433553796, 0.44588358532887434, 1.3349287592823662}, {0.06018676188460007, 0.7733752023906149, 0.2757646371922104, 0.9658908813625235}, 1.4065844318948368},
    {2, {-2.6688789169772313, 0.06606950204914278, 0.0, 0.0}, {0.5068472137172524, -0.18479432232161225, 0.0, 0.0}, {1.0650324457209315, 0.2601934061602498, 0.0, 0.0}, {0.7135706189487911, -0.5425755199114793, 0.0, 0.0}, 2.073340827795634},
    {4, {0.3120785763905606, -0.11084108015895404, -0.3479790087092526, 0.5921971387152924}, {0.621175514282737, 0.7079206261917016, -0.7918543176425595, 0.7909949935324353}, {2.1422009643922815, -0.5069053672140621, -0.8292433196429813, -0.02589149681492628}, {-0.38613414890287584, 0.28182366052623165, -0.12646818540170812, -1.0186652141285255}, 1.3510653135927835},
    {1, {1.2741378950369397, 0.0, 0.0, 0.0}, {-0.34817228231215946, 0.0, 0.0, 0.0}, {0.5813229779854704, 0.0, 0.0, 0.0}, {0.8292533416396, 0.0, 0.0, 0.0}, 1.3661345501916071},
};

// csi_entropy: n, amps[8], bins, eps, expected
struct EntropyCase { int n; double amps[8]; int bins; double eps; double expected; };
static const EntropyCase kEntropyCases[] = {
    {2, {1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 2, 1e-12, 1.0},
    {8, {5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0}, 16, 1e-09, 6.438758958587456e-08},
    {4, {0.0, 1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0}, 4, 1e-09, 2.0},
    {4, {0.0, 0.1, 0.9, 1.0, 0.0, 0.0, 0.0, 0.0}, 2, 1e-09, 1.0},
    {3, {2.9424758919073084, 2.806108034129923, 1.540385432258502, 0.0, 0.0, 0.0, 0.0, 0.0}, 4, 1e-09, 0.9182958555034104},
    {3, {1.5961206282923484, 0.7936422347928855, 0.95580505903867, 0.0, 0.0, 0.0, 0.0, 0.0}, 8, 1e-09, 1.5849625529545694},
    {6, {0.6126540532964491, 2.6052649267788173, 0.3550692920643278, 0.538033341088676, 0.7384438338023822, 1.1883976979103474, 0.0, 0.0}, 13, 1e-09, 2.251629209730109},
    {6, {2.8165022420061683, 0.25598244270422754, 1.4842558678107258, 2.4160644208066238, 2.041855331298978, 2.1613593901537382, 0.0, 0.0}, 3, 1e-09, 1.2516291677211562},
    {2, {2.687056137595833, 2.6153582170978473, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 3, 1e-09, 1.000000015670024},
    {7, {2.490273586313141, 2.855610049637762, 0.8100175674670638, 0.8836202448811923, 2.45489279794467, 2.012770507622923, 2.3486965457919635, 0.0}, 13, 1e-09, 2.2359263872217405},
    {6, {2.307669324649796, 1.6906618799659154, 0.3917692325975429, 2.1186454877674827, 1.3491750312168473, 1.7478311844174035, 0.0, 0.0}, 2, 1e-09, 0.9182958341100451},
    {5, {1.7526673338422916, 1.5634966580015786, 0.3971924477870345, 1.0991946437471027, 2.1026658664839286, 0.0, 0.0, 0.0}, 13, 1e-09, 2.321928145031439},
};

// timestep_loss: n, p[6], y[6], w0, w1, expected
struct TsLossCase { int n; double p[6]; double y[6]; double w0, w1; double expected; };
static const TsLossCase kTsLossCases[] = {
    {2, {0.9, 0.2, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1.0, 2.0, 0.21693229131493114},
    {4, {0.5, 0.5, 0.5, 0.5, 0.0, 0.0}, {1.0, 0.0, 1.0, 0.0, 0.0, 0.0}, 1.0, 1.0, 0.6931471805599453},
    {2, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1.0, 1.0, 9.999778782803785e-13},
    {2, {0.0, 1.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 3.0, 0.5, 48.35432013582218},
    {6, {0.7020821079098618, 0.3350883950396485, 0.6507099656397178, 0.5285784735511418, 0.25708950696578037, 0.22371169012155076}, {1.0, 0.0, 1.0, 1.0, 1.0, 1.0}, 0.3822530761017432, 0.455050356786845, 0.3503510782733374},
    {3, {0.19851545309092597, 0.1465237287556028, 0.617726337514129, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.42800797553971837, 3.488318158352633, 0.19136888001570362},
    {3, {0.630968728650539, 0.06728151717968399, 0.17107380010132237, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}, 3.3250628570352254, 3.2475779040689243, 5.3314717050631755},
    {5, {0.8384204629177091, 0.8226595396761799, 0.7733160284331534, 0.046954382646431175, 0.3661580844472323, 0.0}, {1.0, 1.0, 0.0, 0.0, 1.0, 0.0}, 2.5892633233015427, 3.757704374923065, 1.827725290975076},
    {6, {0.8768241800976856, 0.28921157854953683, 0.13654836224563474, 0.8990718375369167, 0.7980948418107787, 0.947855251750815}, {1.0, 0.0, 1.0, 1.0, 0.0, 0.0}, 1.9558161970068602, 2.0535822061417424, 2.358520267389408},
    {2, {0.07783717506861049, 0.10808262984155673, 0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0, 0.0, 0.0}, 0.799381411219763, 3.922315754623555, 9.370403290075338},
    {6, {0.34090850376514903, 0.16521431168575568, 0.4008276153611981, 0.487865277425799, 0.2490623266430266, 0.8211739263298309}, {1.0, 1.0, 0.0, 1.0, 1.0, 1.0}, 1.6114700440765966, 0.7901541446975724, 0.8199236500612468},
    {4, {0.5521568172237581, 0.8463575491659434, 0.14716241625615592, 0.5987967661224839, 0.0, 0.0}, {1.0, 0.0, 1.0, 0.0, 0.0, 0.0}, 2.669943026004003, 0.31923803365720393, 2.060225016007115},
};

// sequence_loss: n, p[6], y[6], expected
struct SeqLossCase { int n; double p[6]; double y[6]; double expected; };
static const SeqLossCase kSeqLossCases[] = {
    {2, {0.8, 0.3, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.2899092476264711},
    {3, {0.5, 0.5, 0.5, 0.0, 0.0, 0.0}, {1.0, 0.0, 1.0, 0.0, 0.0, 0.0}, 0.6931471805599453},
    {1, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 9.999778782803785e-13},
    {1, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 27.631021115928547},
    {4, {0.15474098638830425, 0.2579383814687342, 0.1364615183670803, 0.8078399776787446, 0.0, 0.0}, {0.0, 0.0, 1.0, 1.0, 0.0, 0.0}, 0.6678847693400103},
    {5, {0.5494259661539761, 0.8110460649634196, 0.9613287562114997, 0.5223373162380216, 0.8669688784049324, 0.0}, {1.0, 1.0, 0.0, 0.0, 0.0, 0.0}, 1.3633986677925582},
    {6, {0.8539299692180586, 0.077043775562667, 0.38084810122936236, 0.8336169005187603, 0.5837351224928436, 0.4791755837695696}, {0.0, 1.0, 0.0, 1.0, 0.0, 0.0}, 1.11286873241475},
    {2, {0.4183457649634541, 0.05188104716512171, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.2975772062984889},
    {1, {0.945281601227758, 0.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.056272405161605484},
    {3, {0.9824963829188538, 0.46060939467695833, 0.060479592406473534, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0, 0.0, 0.0}, 1.6276461209535125},
    {5, {0.4519256948458182, 0.6148222950935128, 0.9280867055940064, 0.30455076109344376, 0.5394643663940802, 0.0}, {1.0, 1.0, 1.0, 0.0, 1.0, 0.0}, 0.46713308550085164},
    {6, {0.08687488636553269, 0.4496688972349864, 0.3306980379232627, 0.608053815104259, 0.9885896584596189, 0.5858805909597227}, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0}, 1.5644244352273426},
};

// topk_pool: n, p[9], k, expected
struct TopkCase { int n; double p[9]; int k; double expected; };
static const TopkCase kTopkCases[] = {
    {9, {0.9, 0.1, 0.8, 0.7, 0.2, 0.3, 0.4, 0.5, 0.6}, 3, 0.8000000000000002},
    {5, {0.4, 0.4, 0.4, 0.4, 0.4, 0.0, 0.0, 0.0, 0.0}, 2, 0.4},
    {3, {0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 3, 0.19999999999999998},
    {1, {0.99, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1, 0.99},
    {8, {0.9519374013059708, 0.2977345499618451, 0.3191419919242342, 0.4147536643895704, 0.2342814935626033, 0.33308933627345205, 0.4619934099833981, 0.6822478472740903, 0.0}, 8, 0.4618974618343955},
    {8, {0.8319070260089232, 0.7309233224433739, 0.5118456859319025, 0.6672646467668503, 0.693270255745618, 0.6533041470822087, 0.9559468358167533, 0.5863866347219012, 0.0}, 6, 0.755436038977288},
    {6, {0.48958572034617487, 0.15111509836972092, 0.4527165086418692, 0.12248994853830364, 0.39515135662212386, 0.6864770189833653, 0.0, 0.0, 0.0}, 2, 0.5880313696647701},
    {9, {0.6107306084830763, 0.4910924676752215, 0.22740324730364625, 0.9137547871990959, 0.45267402867155304, 0.661928864284687, 0.7571307506027034, 0.04886600892269877, 0.5050961253147707}, 5, 0.6897282271768665},
    {5, {0.9736816371930062, 0.07695471711514024, 0.425326289688876, 0.3708745968374457, 0.17497986169201896, 0.0, 0.0, 0.0, 0.0}, 1, 0.9736816371930062},
    {7, {0.6428429145569743, 0.8544929082680097, 0.08124700680456387, 0.12373432822308617, 0.7955279386211347, 0.5475382603330663, 0.30553765480720585, 0.0, 0.0}, 6, 0.5449456674682461},
    {6, {0.6962140338471798, 0.6690305934274776, 0.07533130741785854, 0.4467034514176813, 0.6846195413424693, 0.02640444667666897, 0.0, 0.0, 0.0}, 5, 0.5143797854905333},
    {5, {0.6084784521839982, 0.6994941347091493, 0.07573281542271648, 0.9220694506816616, 0.0031182711140430586, 0.0, 0.0, 0.0, 0.0}, 5, 0.4617786248223137},
};

// pearson: n, a[8], b[8], expected
struct PearsonCase { int n; double a[8]; double b[8]; double expected; };
static const PearsonCase kPearsonCases[] = {
    {4, {1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0}, {2.0, 4.0, 6.0, 8.0, 0.0, 0.0, 0.0, 0.0}, 1.0},
    {4, {1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0}, {8.0, 6.0, 4.0, 2.0, 0.0, 0.0, 0.0, 0.0}, -1.0},
    {4, {1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0}, 0.0},
    {3, {1.2092800823006318, 1.2484355402030394, -0.5183231730688385, 0.0, 0.0, 0.0, 0.0, 0.0}, {-0.9166699521474336, 2.3655925619150784, -2.5871591717363884, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.771300233979569},
    {4, {1.1249635597143794, -0.7495560855146592, -0.11246316184659434, -0.41533083985124747, 0.0, 0.0, 0.0, 0.0}, {1.1653164998127086, -1.212542374838755, -0.5616599630828822, -0.16738341870554366, 0.0, 0.0, 0.0, 0.0}, 0.9434343522008334},
    {2, {0.17197253394473294, 0.8482716515446077, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {-1.1473778587192611, 1.0841681905388523, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.9999999999999999},
    {4, {-0.20629964889487953, -0.10562572565343872, -0.33822463832428434, -0.513620632278008, 0.0, 0.0, 0.0, 0.0}, {-1.288802952376137, 0.022166730249346168, -0.5045642203433216, 0.690363390109685, 0.0, 0.0, 0.0, 0.0}, -0.5304119362802872},
    {2, {-1.28542605076606, -0.6002711266033918, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {1.5305283920749853, 0.25976400451926235, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, -1.0},
    {3, {0.2349949083800416, 1.2955775575407211, -2.518902267303892, 0.0, 0.0, 0.0, 0.0, 0.0}, {-1.0751629161023029, 0.3847283747251793, 0.09255142155825467, 0.0, 0.0, 0.0, 0.0, 0.0}, -0.060592328499820346},
    {8, {1.102600714015933, 1.7954764398859657, -0.8867409625125967, -1.4009857258970713, -1.146014606863899, -0.685164615525269, -0.4740948131733808, -0.579572427596611}, {0.5921114733096071, 0.3998214197244914, 0.20564816431249894, -0.10485321663615614, -0.7613378768104971, -1.0876947673348158, -1.8351869521071602, 0.7200853705104773}, 0.4011625224432057},
    {6, {-0.6881685131541976, -1.5251950959058775, 0.4013148216843192, 0.6780699337973468, 0.4268514433611429, -1.6288896851335175, 0.0, 0.0}, {2.4904375422990035, 2.0484327635029382, -1.404833032814376, 0.6463866024928896, 1.4477884983336757, 0.49927078318392026, 0.0, 0.0}, -0.4073874520634379},
};

// derived_stats: n, series[9], then skew kurt slope drift flatness
struct DerivedCase { int n; double series[9]; double expected[5]; };
static const DerivedCase kDerivedCases[] = {
    {4, {0.0, 1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, -1.36, 1.0, 3.0, 0.9872887811427792}},
    {4, {5.0, 5.0, 5.0, 5.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 1.0}},
    {4, {0.0, 0.0, 0.0, 10.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {1.1547005383792515, -0.6666666666666665, 3.0, 10.0, 1.0}},
    {6, {1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 0.0, 0.0, 0.0}, {0.0, -2.0, -0.17142857142857143, -2.0, 0.0}},
    {4, {2.63783586522843, 1.3560158108604443, 1.376179155059392, 2.9854065079575727, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.08280128205605738, -1.8896464538109434, 0.10628752723863752, 0.3475706427291425, 0.7526288716472239}},
    {6, {-0.8892104154512332, 1.7310990733091312, 1.5099270983868691, 1.9385712814474214, 3.8389755833716785, 2.7071781977025564, 0.0, 0.0, 0.0}, {-0.5931571488704303, -0.21233953181063603, 0.7066919079719184, 3.5963886131537897, 0.9587572134275493}},
    {9, {0.4897773481366019, 1.348394964921312, 1.5487900404729054, 2.775433235735538, -0.06932097662523828, 3.549566789386463, 1.0041588769586558, -0.011604715787840725, 0.6016275982859967}, {0.7664122601787583, -0.5722551977604913, -0.06579544691512422, 0.11185025014939476, 0.9596419223720389}},
    {5, {1.1090205703005487, 1.6929795057399002, 0.4634677613637117, 2.3952037088301243, 2.901316889032689, 0.0, 0.0, 0.0, 0.0}, {-0.050896684287689335, -1.348016244269652, 0.42868168405545043, 1.7922963187321401, 0.9985456063756115}},
    {6, {3.294123796606852, 0.8587518620063503, 2.4068619404807197, 1.027785790182243, 1.2247024080681679, 5.8038782742541475, 0.0, 0.0, 0.0}, {0.9716416420504526, -0.3853942883614674, 0.3505013678892416, 2.5097544776472955, 0.8217837173174638}},
    {8, {3.341037137215182, 1.1863499053632685, 2.9181776813435354, 3.3157091980936335, 1.2795023533040584, 0.42506456043031804, 1.8779363167773044, 3.4586364617166803, 0.0}, {-0.2731726085083523, -1.4923436120333158, -0.06231451046367331, 0.11759932450149835, 0.8514591809510573}},
    {7, {2.1832270058201138, 1.4916804200942035, -0.38814620631169117, 0.3634216913747188, 3.050561986093772, 3.2713512432626253, 1.7592192599371312, 0.0, 0.0}, {-0.3220858365115917, -1.096064147529881, 0.20450095003904853, -0.4240077458829825, 0.6030001908828104}},
    {8, {3.4382777143355963, 0.9986941514651086, -0.4942873092945339, 2.587437358828018, 0.6790877672362035, 1.5459674485798562, 2.030075218622845, 2.6977954022141106, 0.0}, {-0.3359269645831053, -0.8020146689192673, 0.049832664678209966, -0.7404823121214856, 0.9837218328571861}},
};
