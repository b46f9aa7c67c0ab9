import math
R=6371000.0
def fwd(lat,lon,brg,d):
    p1=math.radians(lat); l1=math.radians(lon); t=math.radians(brg); dr=d/R
    p2=math.asin(math.sin(p1)*math.cos(dr)+math.cos(p1)*math.sin(dr)*math.cos(t))
    l2=l1+math.atan2(math.sin(t)*math.sin(dr)*math.cos(p1), math.cos(dr)-math.sin(p1)*math.sin(p2))
    lo=math.degrees(l2); lo=(lo+180)%360-180
    return math.degrees(p2), lo
def inv(a,b):
    p1,l1=map(math.radians,a); p2,l2=map(math.radians,b)
    dl=l2-l1
    y=math.sin(dl)*math.cos(p2); x=math.cos(p1)*math.sin(p2)-math.sin(p1)*math.cos(p2)*math.cos(dl)
    brg=(math.degrees(math.atan2(y,x))+360)%360
    h=math.sin((p2-p1)/2)**2+math.cos(p1)*math.cos(p2)*math.sin(dl/2)**2
    d=2*R*math.atan2(math.sqrt(h),math.sqrt(1-h))
    return brg,d
