package com.acme.netlab.tests;

import com.acme.netlab.alarm.AlarmCenter;
import com.acme.netlab.util.Asserts;
import static com.acme.netlab.core.TestSteps.*;

public class AlarmClearTest {

    public void clearSingle() {
        TestBegin("Clear alarm for code");
        AlarmCenter.getInstance().clear("LOS");
        TestEnd();
    }

    public void clearAllCodes() {
        TestBegin("Clear alarm for all codes");
        AlarmCenter center = AlarmCenter.getInstance();
        center.clear("LOS");
        center.clear("AIS");
        Asserts.check("cleared", 0, center.active());
        TestEnd();
    }

    public void clearWithoutActive() {
        TestBegin("Clear alarm when none active");
        AlarmCenter center = AlarmCenter.getInstance();
        while (center.active() > 0) {
            center.clear("ANY");
        }
        TestEnd();
    }
}
