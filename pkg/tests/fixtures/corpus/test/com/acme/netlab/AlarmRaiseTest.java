package com.acme.netlab.tests;

import com.acme.netlab.alarm.AlarmCenter;
import com.acme.netlab.util.Asserts;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class AlarmRaiseTest {

    public void raiseSingle() {
        TestBegin("Raise alarm for code");
        AlarmCenter.getInstance().raise("LOS");
        Asserts.check("active", 1, AlarmCenter.getInstance().active());
        TestEnd();
    }

    public void raiseTwoCodes() {
        TestBegin("Raise alarm for two codes");
        AlarmCenter center = AlarmCenter.getInstance();
        center.raise("LOS");
        center.raise("AIS");
        TestEnd();
    }

    public void raiseWhileActive() {
        TestBegin("Raise alarm while alarms active");
        AlarmCenter center = AlarmCenter.getInstance();
        if (center.active() > 0) {
            center.raise("SECONDARY");
        }
        TestEnd();
    }

    public void raiseAndLog() {
        TestBegin("Raise alarm and log code");
        AlarmCenter.getInstance().raise("LOS");
        Log.info("raised LOS");
        TestEnd();
    }
}
