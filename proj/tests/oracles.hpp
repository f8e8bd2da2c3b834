#pragma once
// Generated by tests/oracle/derive.py (mpmath, 40 digits). Do not edit.

namespace oracle {

// ellipse a=1.2, b=1
inline constexpr double kPerimeter_1_2 = 6.9257911958096814981;
inline constexpr double kSigma_1_2 = 0.90721552665074691878;
inline constexpr double kMinRhoDD_1_2 = -1.0104177449991528014;
inline constexpr double kMaxRhoDD_1_2 = 1.2125012939989833168;
inline constexpr double kMaxRhoD_1_2 = 0.54999999999999988713;
inline constexpr double kRhoAtZero_1_2 = 0.75601293887562246029;

// ellipse a=1.4, b=1
inline constexpr double kPerimeter_1_4 = 7.5922737869527636494;
inline constexpr double kSigma_1_4 = 0.82757622860982293997;
inline constexpr double kMinRhoDD_1_4 = -1.775531611837551132;
inline constexpr double kMaxRhoDD_1_4 = 2.4857442565725714271;
inline constexpr double kMaxRhoD_1_4 = 1.0285714285714283702;
inline constexpr double kRhoAtZero_1_4 = 0.59112587757844499462;

// ellipse a=2.0, b=1
inline constexpr double kPerimeter_2_0 = 9.6884482205476761984;
inline constexpr double kSigma_2_0 = 0.64852339241014240057;
inline constexpr double kMinRhoDD_2_0 = -3.469419956677590082;
inline constexpr double kMaxRhoDD_2_0 = 6.938839913355180164;
inline constexpr double kMaxRhoD_2_0 = 2.25;
inline constexpr double kRhoAtZero_2_0 = 0.32426169620507120029;

// ellipse a=4.0, b=1
inline constexpr double kPerimeter_4_0 = 17.156843550313668446;
inline constexpr double kSigma_4_0 = 0.36622035333910325876;
inline constexpr double kMinRhoDD_4_0 = -7.6798025406189096537;
inline constexpr double kMaxRhoDD_4_0 = 30.719210162475638615;
inline constexpr double kMaxRhoD_4_0 = 5.625;
inline constexpr double kRhoAtZero_4_0 = 0.09155508833477581469;

// ellipse a=1.4, b=1: curvature radius at phi = 0.7 and sample steps
inline constexpr double kRho_0_7 = 1.0612112653395850649;
inline constexpr double kRhoD1_0_7 = 1.02855286195973436;
inline constexpr double kRhoD2_0_7 = 0.012288851279864521223;
inline constexpr double kTOfPhi_0_7 = 0.78239392249613768206;

struct Step { double phi, theta, phi_bar, theta_bar, length, coin_phi, coin_theta; };
inline constexpr Step kSteps[] = {
    {0.3, 0.7, 1.7645093728144020431, 0.5115610256527795078, 1.3839840949264235131, 4.0801078002139399251, 0.5115610256527795078},
    {2.0, 0.05, 2.1429057900322419223, 0.051354280533414398196, 0.14284468473577356978, 27.434993848563640155, 0.051354280533414398196},
    {4.5, 1.5, 7.7291091478918121899, 1.6964144754018351213, 1.6706439217973654428, 7.5649411255384413093, 1.6964144754018351213},
    {1.0, 2.6, 6.2297783151717719537, 2.3964340836826821811, 0.98168572513084638856, 4.8207075317105999887, 2.3964340836826821811},
    {5.9, 3.0, 11.949844086367925623, 3.0114508336709119192, 0.23262489642615707291, 2.0171999911017043025, 3.0114508336709119192},
};

// d(phi', theta')/d(phi, theta) of the coin map at (0.3, 0.7), ell = 1.3
inline constexpr double kCoinJacobian[4] = {1.1692525591348334529, -1.3995788715611129018, 0.28931655047695232963, 0.77917011538308674233};

}  // namespace oracle
