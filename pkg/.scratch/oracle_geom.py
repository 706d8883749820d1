import numpy as np, math

Re = 6371.0

def visible_3d(sat_pos, target_pos, half_beam):
    """Direct 3-D test: segment clears the Earth and target is inside the cone."""
    d = target_pos - sat_pos
    seg_len = np.linalg.norm(d)
    # nearest point of the segment to the origin
    t = -np.dot(sat_pos, d) / np.dot(d, d)
    t = min(1.0, max(0.0, t))
    closest = sat_pos + t * d
    if np.linalg.norm(closest) < Re * (1 - 1e-12):
        return False
    # angle at the satellite between the target direction and nadir
    nadir = -sat_pos / np.linalg.norm(sat_pos)
    u = d / seg_len
    ang = math.acos(np.clip(np.dot(u, nadir), -1, 1))
    return ang <= half_beam + 1e-15

def theta_max_oracle(Rq, phi, n=4_000_000):
    """Bisection on the central angle using the 3-D test."""
    lo, hi = 0.0, math.pi
    target = np.array([Re, 0.0, 0.0])
    for _ in range(200):
        mid = (lo + hi) / 2
        sat = np.array([Rq * math.cos(mid), Rq * math.sin(mid), 0.0])
        if visible_3d(sat, target, phi / 2):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2

# Freeze the two spec examples
v1 = theta_max_oracle(26371.0, math.pi/6)
v2 = theta_max_oracle(7371.0, math.pi/4)
print("MEO oracle:", repr(v1), "analytic:", math.acos(Re/26371.0))
print("LEO oracle:", repr(v2))
half = math.pi/8
ana = math.asin(7371.0*math.sin(half)/Re) - half
print("LEO analytic:", repr(ana))

# d_max cross check by explicit 3-D points
th = math.acos(Re/26371.0)
sat = np.array([26371.0*math.cos(th), 26371.0*math.sin(th), 0.0])
print("d 3-D:", np.linalg.norm(sat - np.array([Re,0,0])))
print("law-of-cos:", math.sqrt(26371.0**2+Re**2-2*26371.0*Re*math.cos(th)))

# dome angle 3-D construction oracle: serving at zenith over target
Rl = 7371.0
def dome_oracle(theta):
    target = np.array([Re, 0.0, 0.0])
    serving = np.array([Rl, 0.0, 0.0])
    other = np.array([Rl*math.cos(theta), Rl*math.sin(theta), 0.0])
    u1 = (serving-target)/np.linalg.norm(serving-target)
    u2 = (other-target)/np.linalg.norm(other-target)
    return math.acos(np.clip(np.dot(u1,u2),-1,1))
print("dome(0.0597):", repr(dome_oracle(0.0597)))
from constelsim.geom import SphereGeometry, dome_from_central, central_from_dome
g = SphereGeometry(Rl)
print("dome_from_central(0.0597):", repr(dome_from_central(g, 0.0597)))
print("central_from_dome(0.41888):", repr(central_from_dome(g, 0.41888)))
# bisection inversion oracle of dome_from_central
lo, hi = 1e-12, math.acos(Re/Rl)
for _ in range(200):
    mid = (lo+hi)/2
    if dome_from_central(g, mid) < 0.41888: lo = mid
    else: hi = mid
print("bisect inversion:", repr((lo+hi)/2))
