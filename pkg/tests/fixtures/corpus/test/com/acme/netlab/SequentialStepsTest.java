package com.acme.netlab.tests;

import com.acme.netlab.core.Session;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class SequentialStepsTest {
    private Session session = new Session();

    public void connectThenDisconnect() {
        TestBegin("Connect session for sequential steps");
        session.connect("du1");
        TestEnd();
        TestBegin("Disconnect session after sequential steps");
        session.disconnect();
        TestEnd();
    }

    public void logAroundWork() {
        TestBegin("Log before sequential work");
        Log.info("starting");
        TestEnd();
        TestBegin("Log after sequential work");
        Log.info("finished");
        TestEnd();
    }
}
