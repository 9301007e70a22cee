"""Reference values frozen from 40-digit mpmath evaluations of closed forms.

None of them go through the package: each is the textbook expression for the
quantity evaluated independently at high precision.
"""

# |F(w)|^2 = hbar^2 g^2 gamma / (gamma^2 + w^2), tuned reference detector, f = 100 Hz
S_FF_TUNED_100HZ = 4.2212075275089142e-28
# |hbar g^2 Delta / ((w - Delta + i gamma)(w + Delta + i gamma))|, Delta = w = 2 pi 400 Hz
CHI_FF_DETUNED_400HZ = complex(-492648.50983046000853953847888, -3941188.07864368006831630783104)
CHI_FF_DETUNED_400HZ_ABS = 3971859.2655683604
COUPLING_TUNED = 6.9063267732287911e21
COUPLING_DETUNED_400HZ = 6.9063267732241869e21
# hbar |chi_qq| = 4 hbar / (M w^2) at 100 Hz, and its strain amplitude sqrt(.)/L_arm
SQL_100HZ = 2.6712616183572705e-41
SQL_STRAIN_100HZ = 1.292106230723037e-24
# loop factor |1 - chi_qq chi_FF| of the 400 Hz detuned detector
LOOP_BELOW_ONE_HZ = (49.1948313582, 409.36520195)
LOOP_MIN_HZ = 69.96
LOOP_MIN_VALUE = 0.0845261
# single-shot model (hbar = 1), r = 1, phi = pi/6
SINGLE_SHOT_QCRB = 0.089676030891480684
SINGLE_SHOT_SIGMA_THETA0 = 0.97438274358006104
TANH_2 = 0.96402758007581688
